import csv
import io
import json

from reports.aggregate import AggregateStats
from taxonomy.tables import sorted_common_datatypes, sorted_common_purposes
from utils.errors import UnsupportedFormat

FORMATS = ("json", "csv")


def emit_report(stats: AggregateStats, fmt: str = "json") -> bytes:
    """Serialize stats; ``csv`` emits the datatype × purpose heatmap only."""
    if fmt == "json":
        return (json.dumps(stats.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "csv":
        return _heatmap_csv(stats).encode("utf-8")
    raise UnsupportedFormat(f"unsupported report format {fmt!r} (expected one of {', '.join(FORMATS)})")


def _heatmap_csv(stats: AggregateStats) -> str:
    purposes = [p.value for p in sorted_common_purposes()]
    cells = {(c.datatype, c.purpose): c for c in stats.heatmap}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["datatype", *purposes])
    for d in sorted_common_datatypes():
        row = [d.value]
        for p in purposes:
            cell = cells.get((d.value, p))
            row.append("" if cell is None or cell.value is None else repr(cell.value))
        writer.writerow(row)
    return buf.getvalue()


def parse_json_report(data: bytes | str) -> AggregateStats:
    return AggregateStats.model_validate_json(data)
