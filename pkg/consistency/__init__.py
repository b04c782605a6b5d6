from consistency.cross_platform import CrossReport, check_cross_collection, check_cross_pairs
from consistency.diffs import ChangeClass, DiffReport, diff_snapshots
from consistency.flags import (
    PermissionMismatch,
    flag_encrypt_without_collect,
    flag_encryption_permission_mismatch,
    flag_no_security_details,
)
from consistency.policy_checks import (
    ConsistencyReport,
    Direction,
    Finding,
    FindingLevel,
    Practice,
    check_apple_label_vs_policy,
    check_google_label_vs_policy,
)
