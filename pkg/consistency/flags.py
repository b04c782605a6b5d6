"""Trend flags on single Google labels."""

from enum import Enum

from models.apps import AppRecord
from models.labels import GoogleLabel
from utils.errors import MissingPermissionData


class PermissionMismatch(str, Enum):
    none = "none"
    permission_without_encryption = "permission_without_encryption"
    encryption_without_permission = "encryption_without_permission"


def flag_encrypt_without_collect(label: GoogleLabel) -> bool:
    """Claims encryption in transit while collecting and sharing nothing."""
    return not label.collected and not label.shared and label.security.encrypted_in_transit is True


def flag_encryption_permission_mismatch(rec: AppRecord, label: GoogleLabel) -> PermissionMismatch:
    if rec.requests_network_permission is None:
        raise MissingPermissionData(f"{rec.platform.value}:{rec.app_id}: network permission not recorded")
    encrypted = label.security.encrypted_in_transit is True
    if rec.requests_network_permission and not encrypted:
        return PermissionMismatch.permission_without_encryption
    if not rec.requests_network_permission and encrypted:
        return PermissionMismatch.encryption_without_permission
    return PermissionMismatch.none


def flag_no_security_details(label: GoogleLabel) -> bool:
    """None of the security practices is stated either way."""
    return not label.security.any_stated
