from logging import getLogger
from pathlib import Path

from pandas import DataFrame

from lib.utils.create_dir import create_directory

logger = getLogger(__name__)


def export_table_to_csv(df: DataFrame, csv_path: Path, index: bool = False, precision: int | None = None):
    """
    Saves the content of a DataFrame as a csv file.

    Args:
        df: pandas.DataFrame to save
        csv_path: Destination, missing parent directories are created
        index: Whether the index is written as leading columns. Default: False
        precision: Decimal places for floats. Default: full precision
    """
    create_directory(csv_path.parent)

    float_format = f"%.{precision}f" if precision is not None else None
    df.to_csv(path_or_buf=csv_path, index=index, float_format=float_format)
    logger.info(f"Saved table data to: {csv_path}")
