"""Plain index.html linking every chart and table of a report run."""

import html
import logging
from pathlib import Path
from typing import Sequence, Union

from .tables import _write_text

logger = logging.getLogger(__name__)

_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>{title}</title></head>
<body>
<h1>{title}</h1>
<h2>Charts</h2>
<ul>
{charts}
</ul>
<h2>Tables</h2>
<ul>
{tables}
</ul>
</body>
</html>
"""


def _items(out_dir: Path, paths: Sequence[Union[str, Path]]) -> str:
    lines = []
    for path in paths:
        path = Path(path)
        try:
            href = path.relative_to(out_dir).as_posix()
        except ValueError:
            href = path.name
        lines.append(f'<li><a href="{html.escape(href, quote=True)}">{html.escape(path.name)}</a></li>')
    return "\n".join(lines) if lines else "<li>none</li>"


def write_index(out_dir: Union[str, Path], charts: Sequence, tables: Sequence, title: str = "R_t report") -> Path:
    out_dir = Path(out_dir)
    page = _TEMPLATE.format(
        title=html.escape(title),
        charts=_items(out_dir, charts),
        tables=_items(out_dir, tables),
    )
    path = _write_text(out_dir / "index.html", page)
    logger.info("Wrote report index %s", path)
    return path
