from .base_command import BaseCommand
from .detection_commands import DetectCommand, FeaturizeCommand, SuiteCommand, TrainCommand
from .report_commands import ReportCommand
from .simulation_commands import HvacCommand, SimulateCommand

__all__ = [
    "BaseCommand", "DetectCommand", "FeaturizeCommand", "HvacCommand", "ReportCommand",
    "SimulateCommand", "SuiteCommand", "TrainCommand",
]
