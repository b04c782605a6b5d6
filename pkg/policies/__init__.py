from policies.classifier import is_policy, lexicon_score, load_policy_scores
from policies.cleaner import clean_and_filter, segment_policy
from policies.extractor import extract_text
from policies.fetcher import FetchResult, FetchStatus, PoliteFetcher, fetch_many, fetch_policy
from policies.language import Detection, detect_language
