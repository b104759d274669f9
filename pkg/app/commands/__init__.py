"""
Commands module - one subcommand per module
"""

from app.commands import calibrate, curves, cv, fit, import_data, presets, report, simulate, trace

COMMANDS = [simulate, fit, report, curves, cv, import_data, trace, presets, calibrate]

__all__ = ["COMMANDS"]
