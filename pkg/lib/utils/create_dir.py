import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def create_directory(dst_dir: Path, *parts: str) -> Path:
    """
    Helper method to create an output directory, including missing parents.

    Example:
        ``create_directory(<results>/<experiment>, "checkpoints")``
        -> ``<results>/<experiment>/checkpoints``

    Args:
        dst_dir: The base directory.
        parts: Optional sub-directory names below dst_dir.

    Returns:
        Path of the created directory
    """
    final_dir = dst_dir.joinpath(*parts)

    if not final_dir.exists():
        final_dir.mkdir(parents=True, exist_ok=True)
        logger.info(f"Created directory at: {final_dir}")
    else:
        logger.debug(f"Directory already exists: {final_dir}")

    return final_dir
