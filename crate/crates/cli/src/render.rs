//! Binary PPM (P6) heatmaps of the winding field.
//!
//! Pixel centers are sampled over the curve's bounding box, rows top to
//! bottom. Winding `+k` shades toward blue and `-k` toward red, saturating at
//! `|k| = 5`; zero is white and centers on the curve are black.

use isowind::winding::sample_grid;
use isowind::ClosedCurve;

const SATURATION: i64 = 5;
const STEP: i64 = 255 / SATURATION;

pub fn palette(winding: Option<i64>) -> [u8; 3] {
    let Some(w) = winding else {
        return [0, 0, 0];
    };
    let fade = (255 - STEP * w.abs().min(SATURATION)) as u8;
    match w.signum() {
        0 => [255, 255, 255],
        1 => [fade, fade, 255],
        _ => [255, fade, fade],
    }
}

pub fn heatmap_ppm(curve: &ClosedCurve, width: usize, height: usize) -> Vec<u8> {
    let header = format!("P6\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + 3 * width * height);
    out.extend_from_slice(header.as_bytes());
    for w in sample_grid(curve, width, height) {
        out.extend_from_slice(&palette(w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_ramps() {
        assert_eq!(palette(Some(0)), [255, 255, 255]);
        assert_eq!(palette(Some(1)), [204, 204, 255]);
        assert_eq!(palette(Some(-2)), [255, 153, 153]);
        assert_eq!(palette(Some(5)), [0, 0, 255]);
        assert_eq!(palette(Some(-40)), [255, 0, 0]);
        assert_eq!(palette(None), [0, 0, 0]);
    }
}
