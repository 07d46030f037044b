try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str(self.value).__format__(format_spec)


class SynthesisMode(StrEnum):
    FORWARD = "forward"
    BACKWARD = "backward"
    UNION = "union"


class FlowDirection(StrEnum):
    FORWARD = "forward"  # t-1 -> t+1, aligned to the previous cloud
    BACKWARD = "backward"  # t+1 -> t-1, aligned to the next cloud


class ReportFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class BaselineKind(StrEnum):
    AVERAGE = "average"
    OPTICAL_FLOW = "optical-flow"


class SceneLayout(StrEnum):
    STREET = "street"
    WALL = "wall"
