//! Command-line front end (placeholder while the numeric core builds).
