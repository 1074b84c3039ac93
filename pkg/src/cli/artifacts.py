import json
import math
import sys
from enum import Enum
from typing import Any, Optional

import numpy as np
import pandas as pd


def to_jsonable(value: Any) -> Any:
    """numpy → lists, NaN/inf → null, enums → their value, complex → {re, im}."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def write_json(payload: Any, path: Optional[str] = None):
    # repr-based float output is the shortest round-trip form (≤ 17 significant digits)
    text = json.dumps(to_jsonable(payload), indent=2, allow_nan=False)
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def write_csv(frame: pd.DataFrame, path: Optional[str] = None):
    target = path if path else sys.stdout
    frame.to_csv(target, index=False, float_format="%.17g", lineterminator="\n")
