"""loclab: a workbench for finite partial groups, localities, fusion systems
and transporter systems, with exhaustive verification suites at small scale."""

__version__ = "0.1.0"
