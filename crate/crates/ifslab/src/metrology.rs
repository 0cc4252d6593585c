//! Empirical measurement of sampled attractors: box-counting dimension,
//! pixel connectivity, nearest-neighbor statistics, and homothetic-overlap
//! verification.
//!
//! These routines cross-validate the exact results: a dimension equation's
//! root should match the box-count slope within sampling error, a
//! separation certificate should coincide with one pixel-connected
//! component, and a declared overlap should actually look like a scaled
//! copy of the attractor.

use crate::attractor::{bounding_box, map_cloud, PointCloud};
use crate::error::{Error, Result};
use crate::system::IfsSystem;
use crate::system::OverlapSpec;
use crate::tolerances;
use serde::Serialize;
use std::collections::HashSet;

/// Minimum cloud size for box-counting.
pub const MIN_BOX_COUNT_POINTS: usize = 10_000;
/// Octave bounds for box-counting.
pub const OCTAVE_RANGE: (usize, usize) = (4, 12);
/// Resolution bounds for pixel connectivity.
pub const RESOLUTION_RANGE: (usize, usize) = (256, 8192);
/// Cap on nearest-neighbor query samples for mean statistics.
const NN_SAMPLE_CAP: usize = 20_000;

/// Box-count curve and fitted slope.
#[derive(Debug, Clone, Serialize)]
pub struct BoxCountCurve {
    /// Box sizes, descending (coarse to fine); `scales[j-1] = diam / 2^j`.
    pub scales: Vec<f64>,
    /// Occupied-box counts per scale (non-decreasing as boxes shrink).
    pub counts: Vec<usize>,
    /// Least-squares slope of `ln N` against `ln(1/ε)` over the interior
    /// octaves.
    pub slope: f64,
    /// Coefficient of determination of that fit.
    pub r_squared: f64,
    /// Octave numbers included in the fit (first and last are dropped as
    /// saturation guards).
    pub fit_octaves: (usize, usize),
}

/// Counts occupied boxes at dyadic scales and fits the dimension slope.
///
/// Scales are `diam/2^j` for `j = 1..=octaves`, where `diam` is the
/// bounding-box diagonal; grids at successive octaves are nested and share
/// an origin, so counts are monotone. The first and last octave are
/// excluded from the fit: the coarsest boxes saturate toward one box and
/// the finest approach one box per sample point.
pub fn box_count(cloud: &PointCloud, octaves: usize) -> Result<BoxCountCurve> {
    if cloud.len() < MIN_BOX_COUNT_POINTS {
        return Err(Error::Measurement(format!(
            "box-counting needs at least {MIN_BOX_COUNT_POINTS} points, got {}",
            cloud.len()
        )));
    }
    if octaves < OCTAVE_RANGE.0 || octaves > OCTAVE_RANGE.1 {
        return Err(Error::Measurement(format!(
            "octave count must lie in [{}, {}], got {octaves}",
            OCTAVE_RANGE.0, OCTAVE_RANGE.1
        )));
    }
    let (mins, maxs) = bounding_box(cloud)?;
    let diam = mins
        .iter()
        .zip(&maxs)
        .map(|(lo, hi)| (hi - lo) * (hi - lo))
        .sum::<f64>()
        .sqrt();
    if !(diam > 0.0) {
        return Err(Error::Measurement(
            "cloud is a single point; box-count slope is undefined".to_string(),
        ));
    }

    let dim = cloud.dim();
    let mut scales = Vec::with_capacity(octaves);
    let mut counts = Vec::with_capacity(octaves);
    for j in 1..=octaves {
        let eps = diam / (1u64 << j) as f64;
        let cells_cap = (1u64 << j) as i64;
        let mut boxes: HashSet<u128> = HashSet::with_capacity(cloud.len().min(1 << 20));
        for i in 0..cloud.len() {
            let p = cloud.point(i);
            let mut key: u128 = 0;
            for d in 0..dim {
                // Points on the far face land in the last cell.
                let idx = (((p[d] - mins[d]) / eps).floor() as i64).clamp(0, cells_cap - 1);
                key = (key << 13) | (idx as u128);
            }
            boxes.insert(key);
        }
        scales.push(eps);
        counts.push(boxes.len());
    }

    // Fit ln N against ln(1/ε) over octaves 2..=octaves−1.
    let fit_lo = 1usize;
    let fit_hi = octaves - 1;
    let xs: Vec<f64> = (fit_lo..fit_hi).map(|k| (1.0 / scales[k]).ln()).collect();
    let ys: Vec<f64> = (fit_lo..fit_hi).map(|k| (counts[k] as f64).ln()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };

    Ok(BoxCountCurve {
        scales,
        counts,
        slope,
        r_squared,
        fit_octaves: (2, octaves - 1),
    })
}

/// Connected-component census of a rasterized planar cloud.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectivityReport {
    /// Raster side length in pixels.
    pub resolution: usize,
    /// Number of occupied pixels.
    pub occupied_pixels: usize,
    /// Number of 8-connected components.
    pub component_count: usize,
    /// Largest component's share of occupied pixels.
    pub largest_component_fraction: f64,
    /// Side length of one pixel in cloud coordinates.
    pub pixel_pitch: f64,
}

/// Rasterizes a planar cloud onto a square grid (isotropic pixels spanning
/// the longer bounding-box side) and counts 8-connected components.
pub fn pixel_connectivity(cloud: &PointCloud, resolution: usize) -> Result<ConnectivityReport> {
    if cloud.dim() != 2 {
        return Err(Error::Measurement(format!(
            "pixel connectivity is planar-only, got dimension {}",
            cloud.dim()
        )));
    }
    if resolution < RESOLUTION_RANGE.0 || resolution > RESOLUTION_RANGE.1 {
        return Err(Error::Measurement(format!(
            "resolution must lie in [{}, {}], got {resolution}",
            RESOLUTION_RANGE.0, RESOLUTION_RANGE.1
        )));
    }
    let (mins, maxs) = bounding_box(cloud)?;
    let extent = f64::max(maxs[0] - mins[0], maxs[1] - mins[1]);
    if !(extent > 0.0) {
        return Err(Error::Measurement(
            "cloud is a single point; connectivity is undefined".to_string(),
        ));
    }
    let pitch = extent / resolution as f64;

    let bitmap = rasterize(cloud, &mins, pitch, resolution);
    let census = connected_components(&bitmap, resolution);

    Ok(ConnectivityReport {
        resolution,
        occupied_pixels: census.occupied,
        component_count: census.components,
        largest_component_fraction: if census.occupied > 0 {
            census.largest as f64 / census.occupied as f64
        } else {
            0.0
        },
        pixel_pitch: pitch,
    })
}

/// Row-major bit raster.
struct Bitmap {
    words: Vec<u64>,
    width: usize,
}

impl Bitmap {
    fn new(width: usize, height: usize) -> Self {
        Self {
            words: vec![0u64; (width * height).div_ceil(64)],
            width,
        }
    }
    #[inline]
    fn set(&mut self, x: usize, y: usize) {
        let bit = y * self.width + x;
        self.words[bit / 64] |= 1u64 << (bit % 64);
    }
    #[inline]
    fn get(&self, x: usize, y: usize) -> bool {
        let bit = y * self.width + x;
        (self.words[bit / 64] >> (bit % 64)) & 1 == 1
    }
}

fn rasterize(cloud: &PointCloud, mins: &[f64], pitch: f64, resolution: usize) -> Bitmap {
    let mut bitmap = Bitmap::new(resolution, resolution);
    let max_idx = resolution as i64 - 1;
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        let x = (((p[0] - mins[0]) / pitch).floor() as i64).clamp(0, max_idx) as usize;
        let y = (((p[1] - mins[1]) / pitch).floor() as i64).clamp(0, max_idx) as usize;
        bitmap.set(x, y);
    }
    bitmap
}

struct Census {
    occupied: usize,
    components: usize,
    largest: usize,
}

/// Run-based two-pass labelling with 8-connectivity: rows are decomposed
/// into maximal occupied runs, and runs are union-found against the
/// previous row (diagonal adjacency widens the overlap window by one
/// pixel). Memory scales with the number of runs, not pixels.
fn connected_components(bitmap: &Bitmap, resolution: usize) -> Census {
    #[derive(Clone, Copy)]
    struct Run {
        x0: usize,
        x1: usize, // inclusive
        id: usize,
    }
    let mut parent: Vec<usize> = Vec::new();
    let mut size: Vec<usize> = Vec::new();

    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    fn union(parent: &mut [usize], size: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (big, small) = if size[ra] >= size[rb] { (ra, rb) } else { (rb, ra) };
            parent[small] = big;
            size[big] += size[small];
        }
    }

    let mut occupied = 0usize;
    let mut prev_runs: Vec<Run> = Vec::new();
    for y in 0..resolution {
        let mut runs: Vec<Run> = Vec::new();
        let mut x = 0usize;
        while x < resolution {
            if bitmap.get(x, y) {
                let x0 = x;
                while x < resolution && bitmap.get(x, y) {
                    x += 1;
                }
                let x1 = x - 1;
                let id = parent.len();
                parent.push(id);
                size.push(x1 - x0 + 1);
                occupied += x1 - x0 + 1;
                runs.push(Run { x0, x1, id });
            } else {
                x += 1;
            }
        }
        // Merge with the previous row: under 8-connectivity two runs touch
        // when their column ranges, widened by one pixel, intersect.
        let mut pi = 0usize;
        for run in &runs {
            while pi < prev_runs.len() && prev_runs[pi].x1 + 1 < run.x0 {
                pi += 1;
            }
            let mut pj = pi;
            while pj < prev_runs.len() && prev_runs[pj].x0 <= run.x1 + 1 {
                union(&mut parent, &mut size, run.id, prev_runs[pj].id);
                pj += 1;
            }
        }
        prev_runs = runs;
    }

    let mut components = 0usize;
    let mut largest = 0usize;
    for i in 0..parent.len() {
        if find(&mut parent, i) == i {
            components += 1;
            largest = largest.max(size[i]);
        }
    }
    Census {
        occupied,
        components,
        largest,
    }
}

/// Planar k-d tree for exact nearest-neighbor distance queries.
///
/// The tree is implicit: points are median-partitioned in place with
/// alternating split axes, and queries recurse over the same ranges with
/// branch-and-bound pruning, so even far-away queries stay logarithmic.
pub struct KdTree2 {
    pts: Vec<[f64; 2]>,
}

impl KdTree2 {
    /// Builds a tree over a planar cloud.
    pub fn from_cloud(cloud: &PointCloud) -> Result<Self> {
        if cloud.dim() != 2 {
            return Err(Error::Measurement(
                "nearest-neighbor index is planar-only".to_string(),
            ));
        }
        let pts = (0..cloud.len())
            .map(|i| {
                let p = cloud.point(i);
                [p[0], p[1]]
            })
            .collect();
        Ok(Self::from_points(pts))
    }

    /// Builds a tree over raw points.
    pub fn from_points(mut pts: Vec<[f64; 2]>) -> Self {
        Self::build(&mut pts, 0);
        Self { pts }
    }

    fn build(slice: &mut [[f64; 2]], axis: usize) {
        if slice.len() <= 1 {
            return;
        }
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
        let (lo, rest) = slice.split_at_mut(mid);
        let (_, hi) = rest.split_at_mut(1);
        Self::build(lo, axis ^ 1);
        Self::build(hi, axis ^ 1);
    }

    /// Number of indexed points.
    pub fn len(&self) -> usize {
        self.pts.len()
    }

    /// Whether the index holds no points.
    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// Distance from `q` to the nearest indexed point. With `exclude_zero`,
    /// points exactly coinciding with `q` are skipped (for self-queries).
    /// Returns `None` when no admissible point exists.
    pub fn nearest_dist(&self, q: [f64; 2], exclude_zero: bool) -> Option<f64> {
        if self.pts.is_empty() {
            return None;
        }
        let mut best = f64::INFINITY;
        Self::query(&self.pts, 0, q, exclude_zero, &mut best);
        best.is_finite().then(|| best.sqrt())
    }

    fn query(slice: &[[f64; 2]], axis: usize, q: [f64; 2], exclude_zero: bool, best: &mut f64) {
        if slice.is_empty() {
            return;
        }
        let mid = slice.len() / 2;
        let p = slice[mid];
        let dx = p[0] - q[0];
        let dy = p[1] - q[1];
        let d2 = dx * dx + dy * dy;
        if d2 < *best && !(exclude_zero && d2 == 0.0) {
            *best = d2;
        }
        let delta = q[axis] - p[axis];
        let (near, far) = if delta < 0.0 {
            (&slice[..mid], &slice[mid + 1..])
        } else {
            (&slice[mid + 1..], &slice[..mid])
        };
        Self::query(near, axis ^ 1, q, exclude_zero, best);
        if delta * delta < *best {
            Self::query(far, axis ^ 1, q, exclude_zero, best);
        }
    }
}

/// Mean nearest-neighbor spacing of a planar cloud, estimated on an evenly
/// strided sample of up to 20 000 query points (exact below that size).
pub fn mean_nn_spacing(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::Measurement(
            "spacing needs at least two points".to_string(),
        ));
    }
    let tree = KdTree2::from_cloud(cloud)?;
    let stride = cloud.len().div_ceil(NN_SAMPLE_CAP).max(1);
    let mut total = 0.0f64;
    let mut count = 0usize;
    let mut i = 0usize;
    while i < cloud.len() {
        let p = cloud.point(i);
        if let Some(d) = tree.nearest_dist([p[0], p[1]], true) {
            total += d;
            count += 1;
        }
        i += stride;
    }
    if count == 0 {
        return Err(Error::Measurement(
            "all sampled points coincide; spacing is undefined".to_string(),
        ));
    }
    Ok(total / count as f64)
}

/// Maximum nearest-neighbor spacing of a planar cloud, exact over all
/// points: the largest distance from any point to its closest peer.
///
/// This is the resolution of the sample — the scale of the largest gap the
/// cloud can possibly certify. Sup-metric comparisons between a cloud and
/// a transformed copy of itself (for example the pushforward residual, see
/// [`crate::attractor`]) bottom out at this scale rather than at the mean
/// spacing, because the supremum is attained in the most thinly sampled
/// region.
pub fn max_nn_spacing(cloud: &PointCloud) -> Result<f64> {
    if cloud.len() < 2 {
        return Err(Error::Measurement(
            "spacing needs at least two points".to_string(),
        ));
    }
    let tree = KdTree2::from_cloud(cloud)?;
    let mut worst = 0.0f64;
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        if let Some(d) = tree.nearest_dist([p[0], p[1]], true) {
            worst = worst.max(d);
        }
    }
    if worst == 0.0 {
        return Err(Error::Measurement(
            "all points coincide; spacing is undefined".to_string(),
        ));
    }
    Ok(worst)
}

/// Symmetric Hausdorff distance between two planar clouds, exact over all
/// points.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::Measurement(
            "Hausdorff distance is planar-only".to_string(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Measurement(
            "Hausdorff distance needs non-empty clouds".to_string(),
        ));
    }
    let directed = |from: &PointCloud, to_tree: &KdTree2| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..from.len() {
            let p = from.point(i);
            let d = to_tree
                .nearest_dist([p[0], p[1]], false)
                .expect("non-empty index");
            worst = worst.max(d);
        }
        worst
    };
    let tree_a = KdTree2::from_cloud(a)?;
    let tree_b = KdTree2::from_cloud(b)?;
    Ok(f64::max(directed(a, &tree_b), directed(b, &tree_a)))
}

/// Result of testing a declared overlap for homothety.
#[derive(Debug, Clone, Serialize)]
pub struct HomothetyScore {
    /// The signed scale that fit best (`+p` or `−p`).
    pub scale: f64,
    /// Worst directed mean nearest-neighbor distance between the rescaled
    /// cloud and (its share of) the empirical overlap region.
    pub score: f64,
    /// Points of the base cloud lying in every declared image.
    pub overlap_points: usize,
    /// Mean spacing of the base cloud, for reference.
    pub spacing: f64,
    /// Mean spacing of the empirical overlap region — the natural length
    /// scale for accepting `score` (the region is sampled more sparsely
    /// than the full cloud).
    pub overlap_spacing: f64,
}

impl HomothetyScore {
    /// Whether the declared copy explains the overlap region: the score
    /// must stay within the membership factor of the region's own sample
    /// spacing.
    pub fn accepted(&self) -> bool {
        self.score <= tolerances::CLOUD_MEMBERSHIP_FACTOR * self.overlap_spacing
    }
}

/// Tests whether the empirical overlap of the declared images looks like a
/// homothetic copy of the whole attractor: rescales the full cloud by
/// `±scale_p` about `center` and scores the match against the points of
/// the base cloud lying in every declared image.
///
/// Errors when the images do not intersect on the sample — a declared
/// overlap with an empty empirical region does not describe this
/// attractor.
pub fn homothety_check(
    cloud: &PointCloud,
    images: &[PointCloud],
    scale_p: f64,
    center: &[f64],
) -> Result<HomothetyScore> {
    homothety_check_shared(cloud, images, scale_p, center, 1)
}

/// Like [`homothety_check`], for overlap regions shared by `share` declared
/// copies (the same image pair can intersect in several homothetic pieces;
/// each declared copy then only has to explain its fraction of the region).
///
/// The score is the worse of two directed measurements: the mean
/// nearest-neighbor distance from the rescaled cloud into the overlap
/// region (the candidate copy must lie inside the region), and the mean
/// over the best-matching `1/share` of the region's points back to the
/// rescaled cloud (the copy must account for its share of the region).
/// With `share = 1` this is the symmetric mean nearest-neighbor distance.
pub fn homothety_check_shared(
    cloud: &PointCloud,
    images: &[PointCloud],
    scale_p: f64,
    center: &[f64],
    share: usize,
) -> Result<HomothetyScore> {
    if share == 0 {
        return Err(Error::Measurement(
            "overlap share must be at least 1".to_string(),
        ));
    }
    if cloud.dim() != 2 {
        return Err(Error::Measurement(
            "homothety check is planar-only".to_string(),
        ));
    }
    if images.len() < 2 {
        return Err(Error::Measurement(
            "homothety check needs at least two images to intersect".to_string(),
        ));
    }
    if !(scale_p > 0.0 && scale_p < 1.0) {
        return Err(Error::Measurement(format!(
            "overlap scale must lie in (0, 1), got {scale_p}"
        )));
    }
    if center.len() != 2 {
        return Err(Error::Measurement(format!(
            "homothety center must be planar, got {} coordinates",
            center.len()
        )));
    }

    // Membership tolerance per image: a point is "in" an image when its
    // nearest sampled image point lies within 1.5 mean spacings of that
    // image's own sample.
    let mut indexes = Vec::with_capacity(images.len());
    for image in images {
        let spacing = mean_nn_spacing(image)?;
        let tree = KdTree2::from_cloud(image)?;
        indexes.push((tree, tolerances::CLOUD_MEMBERSHIP_FACTOR * spacing));
    }

    let mut overlap_coords: Vec<f64> = Vec::new();
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        let q = [p[0], p[1]];
        if indexes
            .iter()
            .all(|(tree, tol)| tree.nearest_dist(q, false).is_some_and(|d| d <= *tol))
        {
            overlap_coords.extend_from_slice(p);
        }
    }
    let overlap_points = overlap_coords.len() / 2;
    if overlap_points == 0 {
        return Err(Error::Measurement(
            "empirical overlap region is empty: the declared images do not intersect \
             on this sample"
                .to_string(),
        ));
    }
    let overlap = PointCloud::from_raw(2, overlap_coords, vec![0; overlap_points])?;
    let overlap_tree = KdTree2::from_cloud(&overlap)?;
    let overlap_spacing = mean_nn_spacing(&overlap)?;

    let spacing = mean_nn_spacing(cloud)?;
    let mut best: Option<(f64, f64)> = None;
    for lambda in [scale_p, -scale_p] {
        let mut coords = Vec::with_capacity(cloud.len() * 2);
        for i in 0..cloud.len() {
            let p = cloud.point(i);
            coords.push(center[0] + lambda * (p[0] - center[0]));
            coords.push(center[1] + lambda * (p[1] - center[1]));
        }
        let copy = PointCloud::from_raw(2, coords, vec![0; cloud.len()])?;
        let copy_tree = KdTree2::from_cloud(&copy)?;

        // Forward: the candidate copy must sit inside the overlap region.
        let stride = copy.len().div_ceil(NN_SAMPLE_CAP).max(1);
        let mut total = 0.0f64;
        let mut count = 0usize;
        let mut i = 0usize;
        while i < copy.len() {
            let p = copy.point(i);
            total += overlap_tree
                .nearest_dist([p[0], p[1]], false)
                .expect("non-empty index");
            count += 1;
            i += stride;
        }
        let forward = total / count as f64;

        // Backward: the copy must account for its 1/share of the region —
        // score the best-matching fraction of the region's points.
        let mut dists: Vec<f64> = (0..overlap.len())
            .map(|i| {
                let p = overlap.point(i);
                copy_tree
                    .nearest_dist([p[0], p[1]], false)
                    .expect("non-empty index")
            })
            .collect();
        dists.sort_by(f64::total_cmp);
        let kept = overlap.len().div_ceil(share);
        let backward = dists[..kept].iter().sum::<f64>() / kept as f64;

        let score = forward.max(backward);
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((lambda, score));
        }
    }
    let (scale, score) = best.expect("two candidates evaluated");
    Ok(HomothetyScore {
        scale,
        score,
        overlap_points,
        spacing,
        overlap_spacing,
    })
}

/// Convenience wrapper: builds the declared images from the system's maps
/// and runs the homothety check. Several declared overlaps over the same
/// index set describe distinct copies inside one shared region, so the
/// share passed down is the number of entries with this entry's indices.
pub fn homothety_check_system(
    cloud: &PointCloud,
    system: &IfsSystem,
    overlap: &OverlapSpec,
    center: &[f64],
) -> Result<HomothetyScore> {
    let mut images = Vec::with_capacity(overlap.indices.len());
    for &i in &overlap.indices {
        let map = system.maps().get(i).ok_or_else(|| {
            Error::Measurement(format!(
                "overlap references map {i} but the system has {} maps",
                system.len()
            ))
        })?;
        images.push(map_cloud(map, cloud)?);
    }
    let mut key: Vec<usize> = overlap.indices.clone();
    key.sort_unstable();
    let share = system
        .overlaps()
        .iter()
        .filter(|o| {
            let mut other: Vec<usize> = o.indices.clone();
            other.sort_unstable();
            other == key
        })
        .count()
        .max(1);
    homothety_check_shared(cloud, &images, overlap.scale_p, center, share)
}
