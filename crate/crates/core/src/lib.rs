pub mod alexander;
pub mod criteria;
pub mod laurent;
pub mod recurrence;
pub mod repshift;
pub mod rscover;
pub mod twobridge;
pub mod words;
