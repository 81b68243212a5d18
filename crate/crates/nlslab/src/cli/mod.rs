//! (under construction)

pub fn placeholder() {}
