//! Sketch-based repair (placeholder while the core is built).
