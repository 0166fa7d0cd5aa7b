//! Scenario files (under construction).
