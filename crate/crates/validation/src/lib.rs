//! Acceptance criteria for `ghz-discord`, run as the `acceptance` test target:
//!
//! ```text
//! cargo test -p ghz-discord-validation --test acceptance
//! ```
