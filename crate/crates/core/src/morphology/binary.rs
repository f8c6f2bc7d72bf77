use crate::image::BinaryImage;

/// Offsets `(dr, dc)` of a disk structuring element, `dr^2 + dc^2 <= r^2`.
pub fn disk_offsets(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            if dr * dr + dc * dc <= r * r {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// Fills background regions not 4-connected to the image border.
pub fn fill_holes(img: &BinaryImage) -> BinaryImage {
    let (rows, cols) = img.dims();
    let mut outside = vec![false; rows * cols];
    let mut stack = Vec::new();
    let seed = |r: usize, c: usize, stack: &mut Vec<usize>, outside: &mut Vec<bool>| {
        let i = r * cols + c;
        if !img.get(r, c) && !outside[i] {
            outside[i] = true;
            stack.push(i);
        }
    };
    for c in 0..cols {
        seed(0, c, &mut stack, &mut outside);
        seed(rows - 1, c, &mut stack, &mut outside);
    }
    for r in 0..rows {
        seed(r, 0, &mut stack, &mut outside);
        seed(r, cols - 1, &mut stack, &mut outside);
    }
    while let Some(i) = stack.pop() {
        let (r, c) = (i / cols, i % cols);
        if r > 0 {
            seed(r - 1, c, &mut stack, &mut outside);
        }
        if r + 1 < rows {
            seed(r + 1, c, &mut stack, &mut outside);
        }
        if c > 0 {
            seed(r, c - 1, &mut stack, &mut outside);
        }
        if c + 1 < cols {
            seed(r, c + 1, &mut stack, &mut outside);
        }
    }
    BinaryImage::from_fn(rows, cols, |r, c| !outside[r * cols + c])
}

/// Erosion by a disk; pixels outside the image count as background.
pub fn erode(img: &BinaryImage, radius: usize) -> BinaryImage {
    let offsets = disk_offsets(radius);
    let (rows, cols) = img.dims();
    BinaryImage::from_fn(rows, cols, |r, c| {
        offsets.iter().all(|&(dr, dc)| {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols && img.get(nr as usize, nc as usize)
        })
    })
}

/// Dilation by a disk; pixels outside the image count as background.
pub fn dilate(img: &BinaryImage, radius: usize) -> BinaryImage {
    let offsets = disk_offsets(radius);
    let (rows, cols) = img.dims();
    let mut out = BinaryImage::filled(rows, cols, false);
    for r in 0..rows {
        for c in 0..cols {
            if !img.get(r, c) {
                continue;
            }
            for &(dr, dc) in &offsets {
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols {
                    out.set(nr as usize, nc as usize, true);
                }
            }
        }
    }
    out
}
