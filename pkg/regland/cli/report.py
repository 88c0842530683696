import html
import logging
from pathlib import Path

from ..utils import io
from ._models import GateResult

logger = logging.getLogger(__name__)

REPORT_FILE = "index.html"

_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
body {{ font-family: sans-serif; margin: 2em; max-width: 1100px; }}
table {{ border-collapse: collapse; }}
td, th {{ border: 1px solid #ccc; padding: 0.2em 0.6em; text-align: left; }}
.pass {{ color: #2ca02c; }}
.fail {{ color: #d62728; }}
img {{ max-width: 100%; border: 1px solid #eee; margin-bottom: 1em; }}
pre {{ background: #f6f6f6; padding: 1em; overflow-x: auto; }}
</style>
</head>
<body>
<h1>{title}</h1>
{status}
<h2>Gates</h2>
{gates}
<h2>Figures</h2>
{figures}
<h2>Artifacts</h2>
<ul>
{artifacts}
</ul>
<h2>Manifest</h2>
<pre>{manifest}</pre>
</body>
</html>
"""


def _gate_table(gates: list[GateResult]) -> str:
    if not gates:
        return "<p>No gates evaluated.</p>"
    rows = "\n".join(
        f'<tr><td>{html.escape(gate.name)}</td>'
        f'<td class="{"pass" if gate.passed else "fail"}">{"pass" if gate.passed else "FAIL"}</td>'
        f"<td>{html.escape(gate.detail)}</td></tr>"
        for gate in gates
    )
    return f"<table>\n<tr><th>gate</th><th>verdict</th><th>detail</th></tr>\n{rows}\n</table>"


def _read_gates(directory: Path) -> list[GateResult]:
    path = directory / "gates.csv"
    if not path.exists():
        return []
    _, rows = io.read_csv(path)
    return [GateResult(name=name, passed=passed == "1", detail=detail) for name, passed, detail in rows]


def write_report(directory: Path, gates: list[GateResult] | None = None) -> Path:
    """
    Write index.html into `directory`: gate verdicts, every SVG inline as an
    image and a link to every other artifact. Gates are read from gates.csv
    when not given.
    """
    directory = Path(directory)
    gates = _read_gates(directory) if not gates else gates
    files = sorted(p for p in directory.iterdir() if p.is_file() and p.name != REPORT_FILE)

    figures = "\n".join(
        f'<h3>{html.escape(p.stem)}</h3>\n<img src="{html.escape(p.name)}" alt="{html.escape(p.stem)}">'
        for p in files
        if p.suffix == ".svg"
    )
    artifacts = "\n".join(
        f'<li><a href="{html.escape(p.name)}">{html.escape(p.name)}</a></li>' for p in files
    )

    manifest = directory / "manifest.toml"
    failed = directory / "FAILED"
    if failed.exists():
        status = f'<p class="fail">FAILED: {html.escape(failed.read_text(encoding="utf-8"))}</p>'
    else:
        status = ""

    page = _PAGE.format(
        title=html.escape(f"regland report: {directory.name}"),
        status=status,
        gates=_gate_table(gates),
        figures=figures or "<p>No figures.</p>",
        artifacts=artifacts,
        manifest=html.escape(manifest.read_text(encoding="utf-8")) if manifest.exists() else "",
    )
    return io.write_text_atomic(directory / REPORT_FILE, page)
