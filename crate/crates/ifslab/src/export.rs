//! Serialization of sampled attractors: CSV point lists, binary PPM
//! raster images with a per-map color palette, and box-count curves.

use crate::attractor::{bounding_box, PointCloud};
use crate::error::{Error, Result};
use crate::metrology::{BoxCountCurve, RESOLUTION_RANGE};
use std::io::Write;

/// Per-map colors, cycled when a system has more maps than entries:
/// red, blue, green, gold, violet, orange.
pub const PALETTE: [[u8; 3]; 6] = [
    [255, 0, 0],
    [0, 0, 255],
    [0, 160, 0],
    [218, 165, 32],
    [148, 0, 211],
    [255, 140, 0],
];

/// Background color of rendered images (white).
pub const BACKGROUND: [u8; 3] = [255, 255, 255];

/// Color assigned to points produced by the map with the given label.
pub fn label_color(label: u32) -> [u8; 3] {
    PALETTE[(label as usize) % PALETTE.len()]
}

fn coordinate_header(dim: usize) -> String {
    match dim {
        1 => "x".to_string(),
        2 => "x,y".to_string(),
        3 => "x,y,z".to_string(),
        _ => (1..=dim)
            .map(|i| format!("x{i}"))
            .collect::<Vec<_>>()
            .join(","),
    }
}

/// Writes the cloud as CSV with CRLF line endings.
///
/// The header names the coordinate columns (`x`, `x,y`, `x,y,z`, or
/// `x1..xm` beyond three dimensions) followed by `label`, the index of
/// the map that produced each point. Coordinates use the shortest
/// round-trip decimal form.
pub fn write_csv<W: Write>(cloud: &PointCloud, out: &mut W) -> Result<()> {
    write!(out, "{},label\r\n", coordinate_header(cloud.dim()))?;
    let mut line = String::new();
    for i in 0..cloud.len() {
        line.clear();
        for (d, v) in cloud.point(i).iter().enumerate() {
            if d > 0 {
                line.push(',');
            }
            line.push_str(&format!("{v}"));
        }
        write!(out, "{line},{}\r\n", cloud.label(i))?;
    }
    out.flush()?;
    Ok(())
}

/// Renders the cloud to a binary (P6) PPM image.
///
/// Pixels are isotropic (the square raster spans the longer bounding-box
/// side), the background is white, the vertical axis points up, and each
/// point paints its pixel with its map's palette color — later points
/// overwrite earlier ones.
pub fn write_ppm<W: Write>(cloud: &PointCloud, resolution: usize, out: &mut W) -> Result<()> {
    if cloud.dim() != 2 {
        return Err(Error::Measurement(format!(
            "image rendering is planar-only, got dimension {}",
            cloud.dim()
        )));
    }
    if resolution < RESOLUTION_RANGE.0 || resolution > RESOLUTION_RANGE.1 {
        return Err(Error::Measurement(format!(
            "render resolution must lie in [{}, {}], got {resolution}",
            RESOLUTION_RANGE.0, RESOLUTION_RANGE.1
        )));
    }
    let (mins, maxs) = bounding_box(cloud)?;
    let extent = f64::max(maxs[0] - mins[0], maxs[1] - mins[1]);
    if !(extent > 0.0) {
        return Err(Error::Measurement(
            "cloud is a single point; nothing to render".to_string(),
        ));
    }
    let pitch = extent / resolution as f64;
    let max_idx = resolution as i64 - 1;

    let mut pixels = vec![0u8; resolution * resolution * 3];
    for px in pixels.chunks_exact_mut(3) {
        px.copy_from_slice(&BACKGROUND);
    }
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        let ix = (((p[0] - mins[0]) / pitch).floor() as i64).clamp(0, max_idx) as usize;
        let iy = (((p[1] - mins[1]) / pitch).floor() as i64).clamp(0, max_idx) as usize;
        let row = resolution - 1 - iy;
        let offset = (row * resolution + ix) * 3;
        pixels[offset..offset + 3].copy_from_slice(&label_color(cloud.label(i)));
    }

    write!(out, "P6\n{resolution} {resolution}\n255\n")?;
    out.write_all(&pixels)?;
    out.flush()?;
    Ok(())
}

/// Writes a box-count curve as CSV (`epsilon,count`, CRLF line endings),
/// coarse to fine.
pub fn write_boxcount_csv<W: Write>(curve: &BoxCountCurve, out: &mut W) -> Result<()> {
    write!(out, "epsilon,count\r\n")?;
    for (eps, count) in curve.scales.iter().zip(&curve.counts) {
        write!(out, "{eps},{count}\r\n")?;
    }
    out.flush()?;
    Ok(())
}
