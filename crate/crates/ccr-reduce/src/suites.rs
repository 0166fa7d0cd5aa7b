//! Verification suites (under construction).
