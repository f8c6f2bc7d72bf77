use std::fs::File;
use std::io::{BufWriter, Cursor, Read, Write};
use std::path::Path;

use super::format_err;
use crate::error::Result;
use crate::field::HologramFrame;

/// First eight bytes of a raw hologram file; followed by `rows` and `cols`
/// as little-endian `u32`, then `rows * cols` little-endian `f32` values in
/// row-major order.
pub const RAW_MAGIC: [u8; 8] = *b"HOLORAW1";

const SCALE_KEY: &str = "holofocus-scale";
const PITCH_KEY: &str = "holofocus-pixel-pitch-m";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HologramFormat {
    Png,
    RawF32,
}

impl HologramFormat {
    /// `.raw` / `.f32` are raw, anything else PNG.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("raw") | Some("f32") => Self::RawF32,
            _ => Self::Png,
        }
    }
}

/// 16-bit grayscale PNG. Values are stored as `round(v / scale)` with
/// `scale = max / 65535` recorded in a text chunk, so the round-trip error
/// is at most `scale / 2`.
pub fn write_png(path: impl AsRef<Path>, holo: &HologramFrame) -> Result<()> {
    let max = holo.max();
    let scale = if max > 0.0 { max / 65535.0 } else { 1.0 / 65535.0 };
    let (rows, cols) = holo.dims();
    write_png16(path.as_ref(), rows, cols, holo.intensity(), scale, holo.pixel_pitch())
}

pub(crate) fn write_png16(
    path: &Path,
    rows: usize,
    cols: usize,
    values: &[f64],
    scale: f64,
    pixel_pitch: f64,
) -> Result<()> {
    let mut bytes = Vec::with_capacity(rows * cols * 2);
    for &v in values {
        let q = (v / scale).round().clamp(0.0, 65535.0) as u16;
        bytes.extend_from_slice(&q.to_be_bytes());
    }
    let w = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(w, cols as u32, rows as u32);
    enc.set_color(png::ColorType::Grayscale);
    enc.set_depth(png::BitDepth::Sixteen);
    enc.add_text_chunk(SCALE_KEY.to_string(), format!("{scale:e}"))
        .map_err(|e| format_err("png", e))?;
    enc.add_text_chunk(PITCH_KEY.to_string(), format!("{pixel_pitch:e}"))
        .map_err(|e| format_err("png", e))?;
    let mut writer = enc.write_header().map_err(|e| format_err("png", e))?;
    writer.write_image_data(&bytes).map_err(|e| format_err("png", e))?;
    writer.finish().map_err(|e| format_err("png", e))?;
    Ok(())
}

/// Reads 8- or 16-bit grayscale PNG. Files without a scale chunk (e.g. from
/// a camera) are mapped to `[0, 1]`. The pitch is taken from the file when
/// present, else `pixel_pitch`.
pub fn read_png(path: impl AsRef<Path>, pixel_pitch: f64) -> Result<HologramFrame> {
    let (rows, cols, values, pitch) = read_png_values(path.as_ref())?;
    HologramFrame::new(rows, cols, pitch.unwrap_or(pixel_pitch), values)
}

pub(crate) fn read_png_values(path: &Path) -> Result<(usize, usize, Vec<f64>, Option<f64>)> {
    let data = std::fs::read(path)?;
    let mut decoder = png::Decoder::new(Cursor::new(data));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| format_err("png", e))?;
    let mut scale = None;
    let mut pitch = None;
    for chunk in &reader.info().uncompressed_latin1_text {
        let parsed = chunk.text.trim().parse::<f64>().ok();
        match chunk.keyword.as_str() {
            SCALE_KEY => scale = parsed,
            PITCH_KEY => pitch = parsed,
            _ => {}
        }
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| format_err("png", "image too large"))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(|e| format_err("png", e))?;
    let (rows, cols) = (info.height as usize, info.width as usize);
    if info.color_type != png::ColorType::Grayscale {
        return Err(format_err("png", format!("expected grayscale, got {:?}", info.color_type)));
    }
    let line = info.line_size;
    let mut values = Vec::with_capacity(rows * cols);
    match info.bit_depth {
        png::BitDepth::Sixteen => {
            let s = scale.unwrap_or(1.0 / 65535.0);
            for r in 0..rows {
                let row = &buf[r * line..r * line + 2 * cols];
                values.extend(row.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]]) as f64 * s));
            }
        }
        png::BitDepth::Eight => {
            let s = scale.unwrap_or(1.0 / 255.0);
            for r in 0..rows {
                values.extend(buf[r * line..r * line + cols].iter().map(|&b| b as f64 * s));
            }
        }
        other => return Err(format_err("png", format!("unsupported bit depth {other:?}"))),
    }
    Ok((rows, cols, values, pitch))
}

/// Lossless up to `f32` precision.
pub fn write_raw_f32(path: impl AsRef<Path>, holo: &HologramFrame) -> Result<()> {
    let (rows, cols) = holo.dims();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&RAW_MAGIC)?;
    w.write_all(&(rows as u32).to_le_bytes())?;
    w.write_all(&(cols as u32).to_le_bytes())?;
    for &v in holo.intensity() {
        w.write_all(&(v as f32).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_raw_f32(path: impl AsRef<Path>, pixel_pitch: f64) -> Result<HologramFrame> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 16 || bytes[..8] != RAW_MAGIC {
        return Err(format_err("raw", "missing header"));
    }
    let rows = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(bytes[12..16].try_into().expect("4 bytes")) as usize;
    let body = &bytes[16..];
    if body.len() != rows * cols * 4 {
        return Err(format_err(
            "raw",
            format!("{rows}x{cols} needs {} bytes of data, found {}", rows * cols * 4, body.len()),
        ));
    }
    let intensity = body
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
        .collect();
    HologramFrame::new(rows, cols, pixel_pitch, intensity)
}

pub fn write_hologram(path: impl AsRef<Path>, holo: &HologramFrame) -> Result<()> {
    match HologramFormat::from_path(path.as_ref()) {
        HologramFormat::Png => write_png(path, holo),
        HologramFormat::RawF32 => write_raw_f32(path, holo),
    }
}

pub fn read_hologram(path: impl AsRef<Path>, pixel_pitch: f64) -> Result<HologramFrame> {
    match HologramFormat::from_path(path.as_ref()) {
        HologramFormat::Png => read_png(path, pixel_pitch),
        HologramFormat::RawF32 => read_raw_f32(path, pixel_pitch),
    }
}
