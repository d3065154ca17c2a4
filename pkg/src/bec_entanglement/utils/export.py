import dataclasses
from pathlib import Path

import datajoint as dj
import pandas as pd

from bec_entanglement.utils.paths import resolve_output_path

logger = dj.logger


def emit_csv(rows, columns=None, out: str | Path | None = None) -> str:
    """Render dataclass rows as CSV (12 significant digits), optionally writing it.

    Args:
        rows: dataclass instances in output order.
        columns (list[str], optional): header for an empty table; defaults to
            the field names of the first row.
        out (str | Path, optional): destination file.

    Returns:
        str: the CSV text.
    """
    rows = list(rows)
    if columns is None:
        if not rows:
            raise ValueError("columns are required to render an empty table")
        columns = [field.name for field in dataclasses.fields(rows[0])]

    records = [dataclasses.asdict(row) for row in rows]
    table = pd.DataFrame(records, columns=list(columns))
    text = table.to_csv(
        index=False, float_format="%.12g", na_rep="nan", lineterminator="\n"
    )

    if out is not None:
        path = resolve_output_path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        logger.info(f"Wrote {len(rows)} rows to {path}")
    return text
