"""Closed vocabularies of both label formats and of the privacy-label taxonomy.

Member names equal their values so JSON stays readable. Which datatype belongs to
which category, and how Google terms map onto Apple terms, lives in the CSV
tables under ``taxonomy/data`` (see ``taxonomy.tables``).
"""

from enum import Enum


class _Vocabulary(str, Enum):
    def __str__(self) -> str:
        return self.value


class Platform(_Vocabulary):
    apple = "apple"
    google = "google"


# ---------- Apple Privacy Label ----------

class ApplePrivacyType(_Vocabulary):
    DataUsedToTrackYou = "DataUsedToTrackYou"
    DataLinkedToYou = "DataLinkedToYou"
    DataNotLinkedToYou = "DataNotLinkedToYou"
    DataNotCollected = "DataNotCollected"


class ApplePurpose(_Vocabulary):
    # The store documentation speaks of "five main purposes" but names six.
    ThirdPartyAdvertising = "ThirdPartyAdvertising"
    DeveloperAdvertisingOrMarketing = "DeveloperAdvertisingOrMarketing"
    Analytics = "Analytics"
    ProductPersonalization = "ProductPersonalization"
    AppFunctionality = "AppFunctionality"
    OtherPurposes = "OtherPurposes"


class AppleCategory(_Vocabulary):
    ContactInfo = "ContactInfo"
    HealthAndFitness = "HealthAndFitness"
    FinancialInfo = "FinancialInfo"
    Location = "Location"
    SensitiveInfo = "SensitiveInfo"
    Contacts = "Contacts"
    UserContent = "UserContent"
    BrowsingHistory = "BrowsingHistory"
    SearchHistory = "SearchHistory"
    Identifiers = "Identifiers"
    Purchases = "Purchases"
    UsageData = "UsageData"
    Diagnostics = "Diagnostics"
    OtherData = "OtherData"


class AppleDatatype(_Vocabulary):
    Name = "Name"
    EmailAddress = "EmailAddress"
    PhoneNumber = "PhoneNumber"
    PhysicalAddress = "PhysicalAddress"
    OtherUserContactInfo = "OtherUserContactInfo"
    Health = "Health"
    Fitness = "Fitness"
    PaymentInfo = "PaymentInfo"
    CreditInfo = "CreditInfo"
    OtherFinancialInfo = "OtherFinancialInfo"
    PreciseLocation = "PreciseLocation"
    CoarseLocation = "CoarseLocation"
    SensitiveInfo = "SensitiveInfo"
    Contacts = "Contacts"
    EmailsOrTextMessages = "EmailsOrTextMessages"
    PhotosOrVideos = "PhotosOrVideos"
    AudioData = "AudioData"
    GameplayContent = "GameplayContent"
    CustomerSupport = "CustomerSupport"
    OtherUserContent = "OtherUserContent"
    BrowsingHistory = "BrowsingHistory"
    SearchHistory = "SearchHistory"
    UserId = "UserId"
    DeviceId = "DeviceId"
    PurchaseHistory = "PurchaseHistory"
    ProductInteraction = "ProductInteraction"
    AdvertisingData = "AdvertisingData"
    OtherUsageData = "OtherUsageData"
    CrashData = "CrashData"
    PerformanceData = "PerformanceData"
    OtherDiagnosticData = "OtherDiagnosticData"
    OtherDataTypes = "OtherDataTypes"


# ---------- Google Data Safety Section ----------

class GooglePurpose(_Vocabulary):
    AppFunctionality = "AppFunctionality"
    Analytics = "Analytics"
    DeveloperCommunication = "DeveloperCommunication"
    AdvertisingOrMarketing = "AdvertisingOrMarketing"
    FraudPreventionSecurityCompliance = "FraudPreventionSecurityCompliance"
    Personalization = "Personalization"
    AccountManagement = "AccountManagement"


class GoogleCategory(_Vocabulary):
    Location = "Location"
    PersonalInfo = "PersonalInfo"
    FinancialInfo = "FinancialInfo"
    HealthAndFitness = "HealthAndFitness"
    Messages = "Messages"
    PhotosAndVideos = "PhotosAndVideos"
    AudioFiles = "AudioFiles"
    FilesAndDocs = "FilesAndDocs"
    Calendar = "Calendar"
    Contacts = "Contacts"
    AppActivity = "AppActivity"
    WebBrowsing = "WebBrowsing"
    AppInfoAndPerformance = "AppInfoAndPerformance"
    DeviceOrOtherIds = "DeviceOrOtherIds"


class GoogleDatatype(_Vocabulary):
    ApproximateLocation = "ApproximateLocation"
    PreciseLocation = "PreciseLocation"
    Name = "Name"
    EmailAddress = "EmailAddress"
    Address = "Address"
    PhoneNumber = "PhoneNumber"
    RaceAndEthnicity = "RaceAndEthnicity"
    PoliticalOrReligiousBelief = "PoliticalOrReligiousBelief"
    SexualOrientation = "SexualOrientation"
    UserIds = "UserIds"
    UserPaymentInfo = "UserPaymentInfo"
    CreditScore = "CreditScore"
    OtherFinancialInfo = "OtherFinancialInfo"
    PurchaseHistory = "PurchaseHistory"
    HealthInfo = "HealthInfo"
    FitnessInfo = "FitnessInfo"
    Emails = "Emails"
    SmsOrMms = "SmsOrMms"
    OtherInAppMessages = "OtherInAppMessages"
    Photos = "Photos"
    Videos = "Videos"
    VoiceOrSoundRecordings = "VoiceOrSoundRecordings"
    MusicFiles = "MusicFiles"
    OtherAudioFiles = "OtherAudioFiles"
    FilesAndDocs = "FilesAndDocs"
    Calendar = "Calendar"
    Contacts = "Contacts"
    AppInteractions = "AppInteractions"
    OtherUserGeneratedContent = "OtherUserGeneratedContent"
    InAppSearchHistory = "InAppSearchHistory"
    OtherActions = "OtherActions"
    WebBrowsingHistory = "WebBrowsingHistory"
    CrashLogs = "CrashLogs"
    Diagnostics = "Diagnostics"
    OtherAppPerformanceData = "OtherAppPerformanceData"
    DeviceOrOtherIds = "DeviceOrOtherIds"
    OtherInfo = "OtherInfo"


# ---------- common cross-platform space ----------

class CommonPurpose(_Vocabulary):
    AdvertisingOrMarketing = "AdvertisingOrMarketing"
    Analytics = "Analytics"
    AppFunctionality = "AppFunctionality"
    Personalization = "Personalization"


# ---------- privacy-label taxonomy (policy side) ----------

class DataCategory(_Vocabulary):
    AppActivity = "AppActivity"
    AppInfoAndPerformance = "AppInfoAndPerformance"
    SensitiveInfo = "SensitiveInfo"
    Location = "Location"
    HealthAndFitness = "HealthAndFitness"
    DeviceOrOtherId = "DeviceOrOtherId"
    PhotosAndVideos = "PhotosAndVideos"
    WebBrowsing = "WebBrowsing"
    Contacts = "Contacts"
    Calendar = "Calendar"


class TaxonomyPurpose(_Vocabulary):
    AccountManagement = "AccountManagement"
    DeveloperCommunication = "DeveloperCommunication"
    Personalization = "Personalization"
    AdvertisingOrMarketing = "AdvertisingOrMarketing"
