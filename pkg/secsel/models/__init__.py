# This makes the models directory a Python package
# Numeric containers are dataclasses; anything written to JSON is a pydantic model
from secsel.models.baselines import LinearSensorModel
from secsel.models.dataset import DataSet, NetReport, SensorGroup, coordinate_sensors
from secsel.models.manifold import IsomapEmbedding, PCAModel
from secsel.models.objective import IncrementalState, ObjectiveSpec, ObjectiveValue
from secsel.models.reports import (
    DOptimalResult,
    SampleSizeReport,
    ScanEntry,
    SelectionReport,
    SeparationReport,
    ToyReproReport,
    TorusReproReport,
)
from secsel.models.secants import SecantSet
from secsel.models.trace import CoverBound, GreedyTrace, LipschitzSearch

__all__ = [
    "CoverBound",
    "DOptimalResult",
    "DataSet",
    "GreedyTrace",
    "IncrementalState",
    "IsomapEmbedding",
    "LinearSensorModel",
    "LipschitzSearch",
    "NetReport",
    "ObjectiveSpec",
    "ObjectiveValue",
    "PCAModel",
    "SampleSizeReport",
    "ScanEntry",
    "SecantSet",
    "SelectionReport",
    "SensorGroup",
    "SeparationReport",
    "ToyReproReport",
    "TorusReproReport",
    "coordinate_sensors",
]
