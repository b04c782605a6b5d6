from reports.aggregate import AggregateStats, Fraction, aggregate, apply_download_filter, popularity_bucket
from reports.emit import emit_report, parse_json_report
