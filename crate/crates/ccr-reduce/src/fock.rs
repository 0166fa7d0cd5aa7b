//! Truncated Fock-Krein layer (under construction).
