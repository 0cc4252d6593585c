//! File outputs: P6 portable-pixmap rendering and RFC-4180 CSV tables.

use ifslab::{bounding_box, BoxCountCurve, PointCloud};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Background color (white).
const BACKGROUND: [u8; 3] = [255, 255, 255];

/// Per-map colors, cycled by chaos-game label.
const PALETTE: [[u8; 3]; 8] = [
    [203, 32, 47],   // red
    [29, 53, 87],    // navy
    [42, 157, 143],  // teal
    [216, 151, 27],  // gold
    [230, 111, 49],  // orange
    [98, 60, 160],   // purple
    [17, 110, 40],   // green
    [121, 85, 61],   // brown
];

/// Rasterizes a planar cloud onto a square RGB canvas with isotropic
/// pixels (the longer bounding-box side spans the full resolution, the
/// shorter is centered). Pixels take the color of the last point landing
/// in them; the iteration order is deterministic, so so is the image.
pub fn rasterize(cloud: &PointCloud, resolution: usize) -> Result<Vec<u8>, String> {
    if cloud.dim() != 2 {
        return Err(format!(
            "rendering needs a planar cloud, got dimension {}",
            cloud.dim()
        ));
    }
    if resolution == 0 {
        return Err("resolution must be positive".to_string());
    }
    if cloud.is_empty() {
        return Err("cannot render an empty cloud".to_string());
    }
    let (min, max) = bounding_box(cloud).map_err(|e| e.to_string())?;
    let span_x = max[0] - min[0];
    let span_y = max[1] - min[1];
    let span = span_x.max(span_y).max(f64::MIN_POSITIVE);
    let res = resolution;
    let scale = res as f64 / span;
    // Center the shorter side on the canvas.
    let off_x = (res as f64 - span_x * scale) / 2.0;
    let off_y = (res as f64 - span_y * scale) / 2.0;

    let mut rgb = Vec::with_capacity(res * res * 3);
    for _ in 0..res * res {
        rgb.extend_from_slice(&BACKGROUND);
    }
    let clamp = |v: f64| -> usize { (v.max(0.0) as usize).min(res - 1) };
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        let px = clamp((p[0] - min[0]) * scale + off_x);
        // Row 0 is the top of the image: flip the y axis.
        let py_up = clamp((p[1] - min[1]) * scale + off_y);
        let py = res - 1 - py_up;
        let color = PALETTE[cloud.label(i) as usize % PALETTE.len()];
        let at = (py * res + px) * 3;
        rgb[at..at + 3].copy_from_slice(&color);
    }
    Ok(rgb)
}

/// Writes an 8-bit RGB image as a binary portable pixmap (P6).
pub fn write_ppm(path: &Path, resolution: usize, rgb: &[u8]) -> io::Result<()> {
    debug_assert_eq!(rgb.len(), resolution * resolution * 3);
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write!(file, "P6\n{resolution} {resolution}\n255\n")?;
    file.write_all(rgb)?;
    file.flush()
}

/// Writes the cloud as RFC-4180 CSV with header `x,y,label`.
pub fn write_cloud_csv(path: &Path, cloud: &PointCloud) -> io::Result<()> {
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    file.write_all(b"x,y,label\r\n")?;
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        write!(file, "{},{},{}\r\n", p[0], p[1], cloud.label(i))?;
    }
    file.flush()
}

/// Writes a box-count curve as RFC-4180 CSV with header `epsilon,count`.
pub fn write_boxcount_csv(path: &Path, curve: &BoxCountCurve) -> io::Result<()> {
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    file.write_all(b"epsilon,count\r\n")?;
    for (eps, count) in curve.scales.iter().zip(&curve.counts) {
        write!(file, "{eps},{count}\r\n")?;
    }
    file.flush()
}
