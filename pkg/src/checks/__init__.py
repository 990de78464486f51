from .base import BaseCheck, CheckSettings, Subtask
from .delta_limit import DeltaLimitCheck
from .pair import PairCheck
from .pipeline import PipelineCheck
from .qhat import QhatCheck
from .torque import TorqueCheck
from .window import SincWindowCheck

# verification order in reports
CHECKS = {
    check.name: check
    for check in (TorqueCheck, SincWindowCheck, QhatCheck, DeltaLimitCheck, PairCheck, PipelineCheck)
}

__all__ = [
    "BaseCheck",
    "CheckSettings",
    "Subtask",
    "CHECKS",
    "TorqueCheck",
    "SincWindowCheck",
    "QhatCheck",
    "DeltaLimitCheck",
    "PairCheck",
    "PipelineCheck",
]
