use std::path::Path;

use serde::{Deserialize, Serialize};

use super::format_err;
use super::image_files::{read_png_values, write_png16};
use crate::autofocus::ReconstructionStack;
use crate::error::Result;
use crate::image::GrayImage;

/// Name of the index file inside a stack directory.
pub const STACK_INDEX: &str = "index.csv";

#[derive(Debug, Serialize, Deserialize)]
struct IndexRow {
    slice_index: usize,
    reim_index: isize,
    distance_m: f64,
    file: String,
}

/// One 16-bit PNG per slice (`slice_0000.png`, ...) on a fixed `1/65535`
/// scale, plus [`STACK_INDEX`] listing distances.
pub fn write_stack(dir: impl AsRef<Path>, stack: &ReconstructionStack, pixel_pitch: f64) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut index = csv::Writer::from_path(dir.join(STACK_INDEX)).map_err(|e| format_err("csv", e))?;
    for (i, slice) in stack.slices().iter().enumerate() {
        let meta = stack.meta(i);
        let file = format!("slice_{i:04}.png");
        let (rows, cols) = slice.dims();
        write_png16(&dir.join(&file), rows, cols, slice.data(), 1.0 / 65535.0, pixel_pitch)?;
        index
            .serialize(IndexRow {
                slice_index: i,
                reim_index: meta.reim_index,
                distance_m: meta.distance,
                file,
            })
            .map_err(|e| format_err("csv", e))?;
    }
    index.flush()?;
    Ok(())
}

pub fn read_stack(dir: impl AsRef<Path>) -> Result<ReconstructionStack> {
    let dir = dir.as_ref();
    let mut index = csv::Reader::from_path(dir.join(STACK_INDEX)).map_err(|e| format_err("csv", e))?;
    let mut slices = Vec::new();
    let mut distances = Vec::new();
    for row in index.deserialize::<IndexRow>() {
        let row = row.map_err(|e| format_err("csv", e))?;
        if row.slice_index != slices.len() {
            return Err(format_err("csv", format!("stack index out of order at slice {}", row.slice_index)));
        }
        let (rows, cols, values, _) = read_png_values(&dir.join(&row.file))?;
        slices.push(GrayImage::new(rows, cols, values)?);
        distances.push(row.distance_m);
    }
    ReconstructionStack::new(slices, distances)
}
