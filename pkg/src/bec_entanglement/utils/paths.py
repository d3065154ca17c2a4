from pathlib import Path

import datajoint as dj


def get_output_root_dir() -> Path | None:
    output_dir = dj.config.get("custom", {}).get("output_root_dir")
    return Path(output_dir) if output_dir else None


def resolve_output_path(out: str | Path) -> Path:
    """Relative output paths are taken under `output_root_dir` when it is set."""
    out = Path(out)
    root = get_output_root_dir()
    if out.is_absolute() or root is None:
        return out
    return root / out
