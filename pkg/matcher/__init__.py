from matcher.domains import first_level_domain, normalize_url
from matcher.linker import AmbiguityReport, MatchOutcome, MatchResult, MatchTier, match_apps, normalize_name
