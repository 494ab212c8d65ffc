"""
Save and restore network weights together with optimizer state
"""
import json
import logging
import os
from typing import Any, Dict, List, Tuple

import numpy as np

from core.exceptions import CheckpointError

logger = logging.getLogger("checkpoint")


def flatten(arrays: List[np.ndarray]) -> np.ndarray:
    if not arrays:
        return np.zeros(0)
    return np.concatenate([np.ravel(a) for a in arrays])


def unflatten_into(flat: np.ndarray, arrays: List[np.ndarray], path: str = "") -> None:
    """Copy `flat` back into `arrays` in place, in order"""
    expected = sum(a.size for a in arrays)
    if flat.size != expected:
        raise CheckpointError(f"checkpoint holds {flat.size} values, model expects {expected}", path=path)
    offset = 0
    for a in arrays:
        a[...] = flat[offset:offset + a.size].reshape(a.shape)
        offset += a.size


def save_checkpoint(path: str, params: List[np.ndarray], m: List[np.ndarray],
                    v: List[np.ndarray], step: int, header: Dict[str, Any]) -> str:
    """Write one .npz; `header` carries the config snapshot and seed"""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    np.savez(
        path,
        flat_params=flatten(params),
        adam_m=flatten(m),
        adam_v=flatten(v),
        step=np.array(step),
        header=np.array(json.dumps(header, sort_keys=True)),
    )
    logger.info(f"Checkpoint written: {path} (step {step})")
    return path


def load_checkpoint(path: str) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int, Dict[str, Any]]:
    with np.load(path, allow_pickle=False) as data:
        return (
            data["flat_params"].copy(),
            data["adam_m"].copy(),
            data["adam_v"].copy(),
            int(data["step"]),
            json.loads(str(data["header"])),
        )
