"""
Dataset and Report Files

A DataSet is stored as a directory:

    points.csv        N x n states, header x0,x1,...
    targets.csv       N x q targets, header g0,g1,... (absent when q = 0)
    sensors.json      manifest: dataset name, sensor ids, labels, files
    sensor_000.csv    one N x d_j file per sensor
    latent.csv        hidden generator variables, when there are any

Reports are pydantic models written as indented JSON; matrices go to CSV.

Usage:
    write_dataset(ds, "runs/toy")
    ds = read_dataset("runs/toy")
"""

import json
import logging
import os
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from secsel.exceptions import InvalidArgumentError
from secsel.models.dataset import DataSet, SensorGroup
from secsel.models.manifold import IsomapEmbedding

logger = logging.getLogger(__name__)

MANIFEST_FILE = "sensors.json"


class SensorEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: int
    label: str
    dim: int
    file: str


class DatasetManifest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    n_states: int
    target_dim: int
    sensors: List[SensorEntry]
    latent_names: List[str] = []


def write_matrix(path: str, matrix: np.ndarray, columns: Sequence[str]) -> None:
    """Write a matrix as CSV with a one-line header."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    np.savetxt(path, matrix, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")


def read_matrix(path: str) -> np.ndarray:
    if not os.path.exists(path):
        raise InvalidArgumentError(f"missing file {path}")
    try:
        return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as e:
        raise InvalidArgumentError(f"malformed CSV {path}: {e}")


def write_dataset(ds: DataSet, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    write_matrix(os.path.join(directory, "points.csv"), ds.points, [f"x{i}" for i in range(ds.points.shape[1])])
    if ds.target_dim:
        write_matrix(os.path.join(directory, "targets.csv"), ds.targets, [f"g{i}" for i in range(ds.target_dim)])

    entries = []
    for sensor in ds.sensors:
        filename = f"sensor_{sensor.id:03d}.csv"
        write_matrix(os.path.join(directory, filename), sensor.values, [f"{sensor.label}_{k}" for k in range(sensor.dim)])
        entries.append(SensorEntry(id=sensor.id, label=sensor.label, dim=sensor.dim, file=filename))
    if ds.latent is not None:
        write_matrix(os.path.join(directory, "latent.csv"), ds.latent, ds.latent_names)

    manifest = DatasetManifest(
        name=ds.name,
        n_states=ds.n_states,
        target_dim=ds.target_dim,
        sensors=entries,
        latent_names=list(ds.latent_names),
    )
    with open(os.path.join(directory, MANIFEST_FILE), "w") as handle:
        handle.write(manifest.model_dump_json(indent=2))
    logger.info("wrote dataset %s (%d states, %d sensors) to %s", ds.name, ds.n_states, ds.n_sensors, directory)


def read_dataset(directory: str) -> DataSet:
    """
    Load a dataset directory written by write_dataset.

    Raises:
        InvalidArgumentError: if the directory, a file or the manifest is missing or malformed
    """
    manifest_path = os.path.join(directory, MANIFEST_FILE)
    if not os.path.exists(manifest_path):
        raise InvalidArgumentError(f"{directory} is not a dataset directory (no {MANIFEST_FILE})")
    try:
        with open(manifest_path) as handle:
            manifest = DatasetManifest.model_validate_json(handle.read())
    except ValidationError as e:
        raise InvalidArgumentError(f"bad manifest in {directory}: {e.errors()[0]['msg']}")

    points = read_matrix(os.path.join(directory, "points.csv"))
    if manifest.target_dim:
        targets = read_matrix(os.path.join(directory, "targets.csv"))
    else:
        targets = np.zeros((points.shape[0], 0))
    sensors = [
        SensorGroup(id=entry.id, values=read_matrix(os.path.join(directory, entry.file)), label=entry.label)
        for entry in manifest.sensors
    ]
    latent = None
    if manifest.latent_names:
        latent = read_matrix(os.path.join(directory, "latent.csv"))
    return DataSet(
        points=points,
        targets=targets,
        sensors=tuple(sensors),
        name=manifest.name,
        latent=latent,
        latent_names=tuple(manifest.latent_names),
    )


def write_embedding(emb: IsomapEmbedding, directory: str) -> None:
    """embedding.csv (phi1..phir) and eigenvalues.csv."""
    os.makedirs(directory, exist_ok=True)
    write_matrix(os.path.join(directory, "embedding.csv"), emb.coordinates, [f"phi{k + 1}" for k in range(emb.rank)])
    write_matrix(os.path.join(directory, "eigenvalues.csv"), emb.eigenvalues[:, None], ["eigenvalue"])


def write_measurements(ds: DataSet, selection: Sequence[int], path: str) -> None:
    """Selected sensor values per state, followed by the latent columns if any."""
    columns = []
    for j in selection:
        sensor = ds.sensors[j]
        columns += [sensor.label] if sensor.dim == 1 else [f"{sensor.label}_{k}" for k in range(sensor.dim)]
    matrix = ds.measurements(selection)
    if ds.latent is not None:
        matrix = np.hstack([matrix, ds.latent])
        columns += list(ds.latent_names)
    write_matrix(path, matrix, columns)


def write_report(report: dict, directory: Optional[str], name: str) -> Optional[str]:
    """Write a JSON report into ``directory``; returns the path, or None without a directory."""
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{name}.json")
    with open(path, "w") as handle:
        json.dump(report, handle, indent=2, allow_nan=True)
    logger.info("report written to %s", path)
    return path
