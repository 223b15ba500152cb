use chrono::{DateTime, Utc};

use super::UserProfile;

/// Statuses must be strictly greater than this.
pub const MIN_STATUSES: u64 = 10;
/// Statuses must be strictly less than this.
pub const MAX_STATUSES: u64 = 50_000;
pub const MIN_FOLLOWERS: u64 = 10;
pub const MIN_ACCOUNT_AGE_DAYS: i64 = 10;

/// Basic profile-level spam removal.
///
/// Keeps English-language accounts with a non-empty bio, a status count in
/// the open interval (10, 50000), at least 10 followers and an account at
/// least 10 days old at `as_of`.
pub fn passes_spam_filter(profile: &UserProfile, as_of: DateTime<Utc>) -> bool {
    profile.lang == "en"
        && !profile.bio.trim().is_empty()
        && profile.statuses > MIN_STATUSES
        && profile.statuses < MAX_STATUSES
        && profile.followers >= MIN_FOLLOWERS
        && profile.account_age_days(as_of) >= MIN_ACCOUNT_AGE_DAYS
}
