import os
import tempfile
from typing import Iterable, Sequence

from loguru import logger


def format_value(value) -> str:
    """Render one CSV cell; floats keep 17 significant digits so they round-trip exactly."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    """
    Comma-separated text with a header row and '\\n' line endings.

    Example:
        >>> render_csv(("a", "b"), [(1, 0.5)])
        'a,b\\n1,0.5\\n'
    """
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"Row has {len(row)} cells, header has {len(columns)}")
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]):
    """
    Write a CSV file atomically.

    The text is written to a temporary file next to `path` and moved into place, so a
    failure never leaves a partial file behind.

    Args:
        path (str): Destination file; its directory is created if needed.
        columns (Sequence[str]): Header names.
        rows (Iterable[Sequence]): Data rows, each with one value per column.

    Raises:
        OSError: If the directory cannot be created or the file cannot be written.
    """
    rows = list(rows)
    text = render_csv(columns, rows)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
        try:
            with os.fdopen(fd, "w", newline="") as f:
                f.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
    except OSError as e:
        raise OSError(f"Failed to write CSV to {path}: {e}") from e
    logger.info(f"Wrote {len(rows)} rows to {path}")
