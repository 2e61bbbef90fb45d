from enum import Enum


class ChartFormat(Enum):
    TEXT = "text"
    SVG = "svg"

    @classmethod
    def get_format(cls, name: str):
        return cls(name.lower())

    @property
    def suffix(self) -> str:
        return ".txt" if self == ChartFormat.TEXT else ".svg"
