//! File formats: flat TOML configuration, particle CSV tables with a JSON
//! provenance sidecar, 16-bit PNG and raw `f32` holograms, and slice stacks.

mod config_file;
mod image_files;
mod stack_files;
mod table;

pub use config_file::ConfigFile;
pub use image_files::{
    read_hologram, read_png, read_raw_f32, write_hologram, write_png, write_raw_f32, HologramFormat, RAW_MAGIC,
};
pub use stack_files::{read_stack, write_stack, STACK_INDEX};
pub use table::{
    read_detections, read_particles, read_sidecar, sidecar_path, write_detections, write_particles, write_sidecar,
    Provenance,
};

use crate::error::Error;

pub(crate) fn format_err(format: &'static str, reason: impl ToString) -> Error {
    Error::Format { format, reason: reason.to_string() }
}
