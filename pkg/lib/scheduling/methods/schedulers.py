from enum import Enum


class Schedulers(Enum):
    """Available methods for mapping ready tasks to processing elements."""

    MET = "met"  # Minimum Execution Time
    EFT = "eft"  # Earliest Finish Time, first come first served
    ETF = "etf"  # Earliest Task First
    DRM = "drm"  # Deep Resource Manager (actor-critic)

    @classmethod
    def get_scheduler_type(cls, name: str):
        return cls(name.lower())

    @property
    def is_learning(self) -> bool:
        return self == Schedulers.DRM
