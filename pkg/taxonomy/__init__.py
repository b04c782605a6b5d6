from taxonomy.enums import (
    AppleCategory,
    AppleDatatype,
    ApplePrivacyType,
    ApplePurpose,
    CommonPurpose,
    DataCategory,
    GoogleCategory,
    GoogleDatatype,
    GooglePurpose,
    Platform,
    TaxonomyPurpose,
)
from taxonomy.tables import common_space, map_dss_datatype, map_dss_purpose, normalize_apple_purpose
from taxonomy.tags import TagKind, TaxonomyTag, parse_tag_label, tag
