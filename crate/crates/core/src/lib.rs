pub mod context;
pub mod ctext;
pub mod exec;
pub mod forge;
pub mod metrics;
pub mod pipeline;
pub mod renamer;
pub mod slicer;
pub mod wat;
