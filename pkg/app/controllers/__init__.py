"""
Controllers module - experiment orchestration and dataset I/O
"""

from app.controllers.dataset_io import export_dataset, import_dataset
from app.controllers.experiment_controller import ExperimentController

__all__ = ["ExperimentController", "export_dataset", "import_dataset"]
