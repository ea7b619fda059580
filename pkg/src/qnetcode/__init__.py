"""Teleportation-based K-pair quantum network coding and two-qubit correlation tools."""

__version__ = "0.1.0"
