pub mod dataset;
pub mod flowdec;
pub mod simworld;
pub mod util;
