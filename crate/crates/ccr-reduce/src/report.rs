//! Check registry and reports (under construction).
