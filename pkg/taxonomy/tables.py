"""Static lookup tables loaded from the CSV files in ``taxonomy/data``.

Each table is read once per process and exposed as a read-only mapping. The literal
string ``N/A`` in a table means "no counterpart" and is returned as ``None``.
"""

import csv
import hashlib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, TypeVar

from loguru import logger

from taxonomy.enums import (
    AppleCategory,
    AppleDatatype,
    ApplePurpose,
    CommonPurpose,
    DataCategory,
    GoogleCategory,
    GoogleDatatype,
    GooglePurpose,
)
from utils.errors import DataError, InvalidEnum, UnknownCategory, UnknownDatatype, UnknownPurpose

DATA_DIR = Path(__file__).parent / "data"
TABLE_VERSION = "2023.1"
CHECKSUM_FILE = "checksums.sha256"
NOT_APPLICABLE = "N/A"

E = TypeVar("E")


def coerce(enum_cls: type[E], value, error_cls: type[DataError] = InvalidEnum) -> E:
    """Turn a raw string into a member of ``enum_cls`` or raise ``error_cls``."""
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        if error_cls is InvalidEnum:
            raise InvalidEnum(enum_cls.__name__, value, [m.value for m in enum_cls]) from None
        raise error_cls(f"unknown {enum_cls.__name__}: {value!r}") from None


def _read_table(name: str) -> list[tuple[str, str]]:
    path = DATA_DIR / name
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        next(reader, None)
        rows = [(row[0].strip(), row[1].strip()) for row in reader if row and row[0].strip()]
    return rows


def _read_map(name: str, key_cls, value_cls, key_error, value_error):
    table = {}
    for key, value in _read_table(name):
        k = coerce(key_cls, key, key_error)
        if k in table:
            raise DataError(f"{name}: duplicate row for {key}")
        table[k] = None if value == NOT_APPLICABLE else coerce(value_cls, value, value_error)
    missing = set(key_cls) - set(table)
    if missing:
        raise DataError(f"{name}: no row for {', '.join(sorted(m.value for m in missing))}")
    _check_once()
    return MappingProxyType(table)


def _read_membership(name: str, category_cls, datatype_cls):
    members: dict = {}
    for category, datatype in _read_table(name):
        c = coerce(category_cls, category, UnknownCategory)
        d = coerce(datatype_cls, datatype, UnknownDatatype)
        members.setdefault(c, set()).add(d)
    _check_once()
    return MappingProxyType({c: frozenset(ds) for c, ds in members.items()})


# ---------- checksums ----------

def file_digest(name: str) -> str:
    return hashlib.sha256((DATA_DIR / name).read_bytes()).hexdigest()


def recorded_checksums() -> dict[str, str]:
    sums = {}
    for line in (DATA_DIR / CHECKSUM_FILE).read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            digest, name = line.split(maxsplit=1)
            sums[name.strip().lstrip("*")] = digest
    return sums


def verify_checksums() -> list[str]:
    """Names of table files whose content no longer matches the recorded digest."""
    return sorted(name for name, digest in recorded_checksums().items() if file_digest(name) != digest)


@lru_cache(maxsize=1)
def _check_once() -> None:
    changed = verify_checksums()
    if changed:
        logger.warning(f"⚠ taxonomy tables edited since version {TABLE_VERSION}: {', '.join(changed)}")


# ---------- tables ----------

@lru_cache(maxsize=1)
def apple_membership() -> Mapping[AppleCategory, frozenset[AppleDatatype]]:
    return _read_membership("apple_datatypes.csv", AppleCategory, AppleDatatype)


@lru_cache(maxsize=1)
def google_membership() -> Mapping[GoogleCategory, frozenset[GoogleDatatype]]:
    return _read_membership("google_datatypes.csv", GoogleCategory, GoogleDatatype)


@lru_cache(maxsize=1)
def datatype_map() -> Mapping[GoogleDatatype, AppleDatatype | None]:
    return _read_map("datatype_map.csv", GoogleDatatype, AppleDatatype, UnknownDatatype, UnknownDatatype)


@lru_cache(maxsize=1)
def purpose_map() -> Mapping[GooglePurpose, CommonPurpose | None]:
    return _read_map("purpose_map.csv", GooglePurpose, CommonPurpose, UnknownPurpose, UnknownPurpose)


@lru_cache(maxsize=1)
def apple_purpose_map() -> Mapping[ApplePurpose, CommonPurpose | None]:
    return _read_map("apple_purpose_map.csv", ApplePurpose, CommonPurpose, UnknownPurpose, UnknownPurpose)


@lru_cache(maxsize=1)
def google_category_map() -> Mapping[GoogleCategory, DataCategory | None]:
    return _read_map("google_category_map.csv", GoogleCategory, DataCategory, UnknownCategory, UnknownCategory)


@lru_cache(maxsize=1)
def apple_category_map() -> Mapping[AppleCategory, DataCategory | None]:
    return _read_map("apple_category_map.csv", AppleCategory, DataCategory, UnknownCategory, UnknownCategory)


@dataclass(frozen=True)
class CrossPlatformMap:
    """The folds that project a Google and an Apple label into one comparable space."""

    datatype_map: Mapping[GoogleDatatype, AppleDatatype | None]
    purpose_map: Mapping[GooglePurpose, CommonPurpose | None]
    apple_purpose_map: Mapping[ApplePurpose, CommonPurpose | None]

    @property
    def common_datatypes(self) -> frozenset[AppleDatatype]:
        return frozenset(v for v in self.datatype_map.values() if v is not None)


@lru_cache(maxsize=1)
def cross_platform_map() -> CrossPlatformMap:
    return CrossPlatformMap(datatype_map=datatype_map(), purpose_map=purpose_map(),
                            apple_purpose_map=apple_purpose_map())


# ---------- operations ----------

def map_dss_datatype(dt: GoogleDatatype | str) -> AppleDatatype | None:
    """Apple counterpart of a Data Safety datatype, or None when it has none."""
    return datatype_map()[coerce(GoogleDatatype, dt, UnknownDatatype)]


def map_dss_purpose(p: GooglePurpose | str) -> CommonPurpose | None:
    """Common purpose of a Data Safety purpose, or None when Apple has no equivalent."""
    return purpose_map()[coerce(GooglePurpose, p, UnknownPurpose)]


def normalize_apple_purpose(p: ApplePurpose | str) -> CommonPurpose | None:
    """Fold both Apple advertising purposes into one; Other Purposes has no common counterpart."""
    return apple_purpose_map()[coerce(ApplePurpose, p, UnknownPurpose)]


@lru_cache(maxsize=1)
def common_space() -> tuple[frozenset[AppleDatatype], frozenset[CommonPurpose]]:
    """The datatypes and purposes both label formats can express."""
    datatypes = frozenset(v for v in datatype_map().values() if v is not None)
    purposes = frozenset(v for v in purpose_map().values() if v is not None)
    return datatypes, purposes


def sorted_common_datatypes() -> list[AppleDatatype]:
    return sorted(common_space()[0], key=lambda d: d.value)


def sorted_common_purposes() -> list[CommonPurpose]:
    return sorted(common_space()[1], key=lambda p: p.value)


def apple_category_of(dt: AppleDatatype) -> AppleCategory | None:
    for category, members in apple_membership().items():
        if dt in members:
            return category
    return None
