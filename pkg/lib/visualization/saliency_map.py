from html import escape

import numpy as np

from lib.drm.encoding import EncodingLayout
from lib.visualization.colors import heat_color

CELL = 12
GAP = 24
LEFT = 50
TOP = 50


def emit_saliency_map(vector: np.ndarray, layout: EncodingLayout, title: str = "") -> str:
    """
    Heat map of a state-sized vector (a saliency vector or an encoded state).
    Every encoding block is drawn as its own grid with one row per task,
    cells are shaded by magnitude relative to the largest entry.

    Args:
        vector: One value per state entry
        layout: Encoding layout the vector follows
        title: Optional chart title

    Raises:
        ValueError: If the vector length differs from the layout dimension
    """
    vector = np.abs(np.asarray(vector, dtype=np.float64).ravel())
    if vector.size != layout.dimension:
        raise ValueError(
            f"Error: Vector has {vector.size} entries, the layout for {layout.num_tasks} tasks "
            f"and {layout.num_pes} PEs has {layout.dimension}"
        )

    peak = vector.max() if vector.size else 0.0
    normalized = vector / peak if peak > 0 else np.zeros_like(vector)

    n = layout.num_tasks
    widths = [block.size // n if n else 0 for block in layout.blocks]
    total_width = LEFT + sum(w * CELL for w in widths) + GAP * len(widths)
    height = TOP + n * CELL + 30

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_width}" height="{height}" '
        f'viewBox="0 0 {total_width} {height}" font-family="Arial, sans-serif" font-size="10">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{LEFT}" y="18" font-size="13">{escape(title or "State saliency")}</text>',
    ]

    for task in range(n):
        parts.append(f'<text x="{LEFT - 6}" y="{TOP + task * CELL + CELL - 2}" text-anchor="end">T{task}</text>')

    x0 = LEFT
    for block, width in zip(layout.blocks, widths):
        parts.append(f'<g class="block" data-block="{block.name}">')
        parts.append(f'<text class="block-label" x="{x0}" y="{TOP - 8}">{block.name}</text>')

        for offset in range(block.size):
            index = block.start + offset
            row, col = divmod(offset, width)
            parts.append(
                f'<rect class="cell" x="{x0 + col * CELL}" y="{TOP + row * CELL}" width="{CELL}" height="{CELL}" '
                f'fill="{heat_color(normalized[index])}" stroke="#eeeeee" stroke-width="0.5" '
                f'data-index="{index}" data-value="{normalized[index]:.4f}"/>'
            )

        parts.append("</g>")
        x0 += width * CELL + GAP

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
