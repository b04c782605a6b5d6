"""App store metadata records and their canonical JSON form."""

from enum import Enum
from typing import Any, Mapping
from urllib.parse import urlparse

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from taxonomy.enums import Platform
from taxonomy.tables import coerce
from utils.errors import InvalidEnum, MalformedRecord


class PriceClass(str, Enum):
    free = "free"
    free_with_iap = "free_with_iap"
    paid = "paid"


class AgeRating(str, Enum):
    Everyone = "Everyone"
    Everyone10 = "Everyone10"
    Teen = "Teen"
    Mature17 = "Mature17"
    # accepted on ingest, left out of age-rating aggregation
    Adults18 = "Adults18"
    Apple4 = "4+"
    Apple9 = "9+"
    Apple12 = "12+"
    Apple17 = "17+"


AGE_RATINGS: dict[Platform, frozenset[AgeRating]] = {
    Platform.google: frozenset({AgeRating.Everyone, AgeRating.Everyone10, AgeRating.Teen,
                                AgeRating.Mature17, AgeRating.Adults18}),
    Platform.apple: frozenset({AgeRating.Apple4, AgeRating.Apple9, AgeRating.Apple12, AgeRating.Apple17}),
}

RECORD_FIELDS = (
    "platform", "app_id", "name", "developer_name", "policy_url", "developer_website",
    "downloads", "price_class", "age_rating", "genre", "requests_network_permission",
)


def is_absolute_url(url: str) -> bool:
    parsed = urlparse(url)
    return bool(parsed.scheme) and bool(parsed.netloc)


class AppRecord(BaseModel):
    """Store metadata of one app on one platform."""

    model_config = ConfigDict(frozen=True, extra="ignore")

    platform: Platform
    app_id: str = Field(min_length=1)
    name: str = ""
    developer_name: str = ""
    policy_url: str | None = None
    developer_website: str | None = None
    downloads: int | None = Field(None, ge=0)
    price_class: PriceClass = PriceClass.free
    age_rating: AgeRating | None = None
    genre: str = ""
    requests_network_permission: bool | None = None

    @field_validator("policy_url", "developer_website")
    @classmethod
    def _absolute(cls, v: str | None) -> str | None:
        if v is not None and not is_absolute_url(v):
            raise ValueError(f"URL must be absolute: {v!r}")
        return v

    @model_validator(mode="after")
    def _platform_rules(self):
        if self.platform is Platform.apple:
            if self.downloads is not None:
                raise ValueError("downloads is only recorded for google apps")
            if self.requests_network_permission is not None:
                raise ValueError("requests_network_permission is only recorded for google apps")
        if self.age_rating is not None and self.age_rating not in AGE_RATINGS[self.platform]:
            raise ValueError(f"age rating {self.age_rating.value!r} is not a {self.platform.value} rating")
        return self

    @property
    def key(self) -> tuple[str, str]:
        return self.platform.value, self.app_id


def parse_app_record(obj: Mapping[str, Any]) -> AppRecord:
    """Build an AppRecord from a canonical ingest object; unknown keys are ignored.

    Missing ``platform``/``app_id`` and any structural fault raise MalformedRecord;
    a bad ``platform``, ``price_class`` or ``age_rating`` value raises InvalidEnum.
    """
    if not isinstance(obj, Mapping):
        raise MalformedRecord(f"expected an object, got {type(obj).__name__}")
    for required in ("platform", "app_id"):
        if obj.get(required) in (None, ""):
            raise MalformedRecord(f"missing {required}")

    data = {k: obj[k] for k in RECORD_FIELDS if k in obj}
    platform = coerce(Platform, data["platform"])
    data["platform"] = platform
    if data.get("price_class") is not None:
        data["price_class"] = coerce(PriceClass, data["price_class"])
    else:
        data.pop("price_class", None)
    if data.get("age_rating") is not None:
        rating = coerce(AgeRating, data["age_rating"])
        if rating not in AGE_RATINGS[platform]:
            raise InvalidEnum("age_rating", rating.value, [r.value for r in AGE_RATINGS[platform]])
        data["age_rating"] = rating
    try:
        return AppRecord.model_validate(data)
    except ValidationError as e:
        raise MalformedRecord(f"{platform.value}:{data.get('app_id')}: {_first_error(e)}") from e


def serialize_app_record(rec: AppRecord) -> dict[str, Any]:
    return rec.model_dump(mode="json")


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    loc = ".".join(str(p) for p in err.get("loc", ())) or "record"
    return f"{loc}: {err.get('msg')}"
