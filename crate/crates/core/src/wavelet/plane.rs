use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::raster::Image;

/// Boundary extension used when padding and when kernels reach past an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaddingMode {
    /// Mirror without repeating the edge sample (`... c b | a b c | b a ...`).
    #[default]
    Reflect,
    /// Wrap around.
    Periodic,
}

impl PaddingMode {
    /// Maps a possibly out-of-range index onto `0..n`.
    #[inline]
    pub fn index(self, i: isize, n: usize) -> usize {
        let n = n as isize;
        match self {
            PaddingMode::Periodic => i.rem_euclid(n) as usize,
            PaddingMode::Reflect => {
                if n == 1 {
                    return 0;
                }
                let period = 2 * (n - 1);
                let m = i.rem_euclid(period);
                (if m < n { m } else { period - m }) as usize
            }
        }
    }
}

/// `f64` working grid for the wavelet operators.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_image(img: &Image) -> Self {
        Self {
            width: img.width(),
            height: img.height(),
            data: img.to_f64(),
        }
    }

    pub fn to_image(&self) -> Result<Image> {
        Image::from_f64(self.width, self.height, &self.data)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Extends the grid on the right and bottom to `width x height`.
    pub fn pad_to(&self, width: usize, height: usize, mode: PaddingMode) -> Plane {
        if width == self.width && height == self.height {
            return self.clone();
        }
        let mut out = Plane::zeros(width, height);
        for y in 0..height {
            let sy = mode.index(y as isize, self.height);
            for x in 0..width {
                let sx = mode.index(x as isize, self.width);
                out.set(x, y, self.get(sx, sy));
            }
        }
        out
    }

    pub fn crop(&self, width: usize, height: usize) -> Plane {
        let mut out = Plane::zeros(width, height);
        for y in 0..height {
            out.data[y * width..(y + 1) * width]
                .copy_from_slice(&self.data[y * self.width..y * self.width + width]);
        }
        out
    }

    /// Same-size correlation with a `k x k` kernel (`kernel[r * k + c]`).
    /// Tap `(r, c)` reads the input at offset `(c - (k-1)/2, r - (k-1)/2)`.
    pub fn correlate(&self, kernel: &[f64], k: usize, mode: PaddingMode) -> Plane {
        let anchor = ((k - 1) / 2) as isize;
        let mut out = Plane::zeros(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let mut acc = 0.0;
                for r in 0..k {
                    let sy = mode.index(y as isize + r as isize - anchor, self.height);
                    let row = &self.data[sy * self.width..(sy + 1) * self.width];
                    for c in 0..k {
                        let w = kernel[r * k + c];
                        if w != 0.0 {
                            let sx = mode.index(x as isize + c as isize - anchor, self.width);
                            acc += w * row[sx];
                        }
                    }
                }
                out.set(x, y, acc);
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Plane) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for a in &mut self.data {
            *a *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_and_periodic_indexing() {
        let r: Vec<usize> = (-3..7).map(|i| PaddingMode::Reflect.index(i, 4)).collect();
        assert_eq!(r, vec![3, 2, 1, 0, 1, 2, 3, 2, 1, 0]);
        let p: Vec<usize> = (-3..7).map(|i| PaddingMode::Periodic.index(i, 4)).collect();
        assert_eq!(p, vec![1, 2, 3, 0, 1, 2, 3, 0, 1, 2]);
        assert_eq!(PaddingMode::Reflect.index(5, 1), 0);
    }
}
