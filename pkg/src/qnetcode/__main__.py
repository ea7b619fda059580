import sys

from qnetcode.cli import main

sys.exit(main())
