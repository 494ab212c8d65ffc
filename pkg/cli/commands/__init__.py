"""
tvpinn commands
"""
from cli.commands.base_command import BaseCommand
from cli.commands.fit import FitCommand
from cli.commands.simulate import SimulateCommand
from cli.commands.verify import VerifyCommand

__all__ = ["BaseCommand", "FitCommand", "SimulateCommand", "VerifyCommand"]
