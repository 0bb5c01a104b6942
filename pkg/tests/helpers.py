import numpy as np


def op_norm(m) -> float:
    m = np.asarray(m, dtype=float)
    return float(np.linalg.norm(m, 2)) if m.size else 0.0
