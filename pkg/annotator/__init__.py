from annotator.backends import (
    AnnotatorBackend,
    FileBackend,
    KeywordBackend,
    NullBackend,
    export_annotations,
    load_external_annotations,
    resolve_backend,
)
from annotator.practices import PracticeSet, annotate, annotate_many, extract_practices
