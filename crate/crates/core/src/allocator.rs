//! Generating new tags inside a region, and re-tagging a run of tags so
//! that new slots open up without moving the region's boundaries.

use num_bigint::BigInt;
use thiserror::Error;

use crate::label::{Bound, EcnTag, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocError {
    #[error("empty region: {lower} is not below {upper}")]
    EmptyRegion { lower: Bound, upper: Bound },
    #[error("position {m} is outside 1..={n}")]
    IndexOutOfRange { n: u64, m: u64 },
    #[error("tag {tag} lies outside region {region}")]
    RegionViolation { tag: EcnTag, region: Region },
    #[error("tags are not strictly ascending at {0}")]
    NotAscending(EcnTag),
    #[error("spacing must be at least 1")]
    ZeroSpacing,
}

/// The `m`-th of `n` evenly positioned tags strictly inside `region`.
///
/// The result depends only on the region bounds, `n` and `m`, and for fixed
/// bounds and `n` it is strictly increasing in `m`. Tags are placed at the
/// first depth where the bounds differ if enough integers fit between them
/// there; otherwise the run descends one level below that depth on the
/// lower bound's side.
pub fn insert_between(region: &Region, n: u64, m: u64) -> Result<EcnTag, AllocError> {
    if m == 0 || m > n {
        return Err(AllocError::IndexOutOfRange { n, m });
    }
    let m_big = BigInt::from(m);
    let tag = match (region.lower(), region.upper()) {
        (Bound::Min, Bound::Max) => EcnTag::unit(0, m),
        // The n integers just below the upper bound's leading coefficient.
        (Bound::Min, Bound::Tag(hi)) => {
            EcnTag::unit(0, hi.coefficient(0) - BigInt::from(n) - 1 + m_big)
        }
        (Bound::Tag(lo), Bound::Max) => EcnTag::unit(0, lo.coefficient(0) + m_big),
        (Bound::Tag(lo), Bound::Tag(hi)) => {
            let d = lo
                .first_difference(hi)
                .expect("region bounds are distinct");
            let (lo_d, hi_d) = (lo.coefficient(d), hi.coefficient(d));
            let room: BigInt = &hi_d - &lo_d - 1;
            if room >= BigInt::from(n) {
                lo.with_coefficient(d, lo_d + m_big)
            } else {
                lo.with_coefficient(d + 1, lo.coefficient(d + 1) + m_big)
            }
        }
        (lower, upper) => {
            return Err(AllocError::EmptyRegion {
                lower: lower.clone(),
                upper: upper.clone(),
            })
        }
    };
    debug_assert!(region.contains(&tag));
    Ok(tag)
}

/// [`insert_between`] on `(lower, MAX)`.
pub fn insert_after(lower: &EcnTag, n: u64, m: u64) -> Result<EcnTag, AllocError> {
    let region = Region::new(lower.clone(), Bound::Max).expect("finite lower bound is below MAX");
    insert_between(&region, n, m)
}

/// [`insert_between`] on `(MIN, upper)`.
pub fn insert_before(upper: &EcnTag, n: u64, m: u64) -> Result<EcnTag, AllocError> {
    let region = Region::new(Bound::Min, upper.clone()).expect("MIN is below a finite upper bound");
    insert_between(&region, n, m)
}

/// Re-tags an ascending run inside `region` onto an arithmetic progression
/// with step `spacing`, anchored at the first tag.
///
/// The progression runs on the anchor's last coefficient. When it would
/// reach the region's upper bound there, it moves to successively deeper
/// levels below the anchor until it fits. Order is preserved, every output
/// stays strictly inside `region`, and the region bounds themselves are not
/// touched.
pub fn retag_region(
    region: &Region,
    tags: &[EcnTag],
    spacing: u64,
) -> Result<Vec<EcnTag>, AllocError> {
    if spacing == 0 {
        return Err(AllocError::ZeroSpacing);
    }
    for tag in tags {
        if !region.contains(tag) {
            return Err(AllocError::RegionViolation {
                tag: tag.clone(),
                region: region.clone(),
            });
        }
    }
    if let Some(w) = tags.windows(2).find(|w| w[0] >= w[1]) {
        return Err(AllocError::NotAscending(w[1].clone()));
    }
    let Some(anchor) = tags.first() else {
        return Ok(Vec::new());
    };

    let step = BigInt::from(spacing);
    let last_offset = BigInt::from(tags.len() as u64 - 1) * &step;
    let fits = |depth: usize| -> bool {
        let top = anchor.with_coefficient(depth, anchor.coefficient(depth) + &last_offset);
        match region.upper() {
            Bound::Tag(hi) => top < *hi,
            _ => true,
        }
    };
    // Start on the anchor's own last coefficient, then try deeper levels.
    // Once the progression sits below the depth where the anchor and the
    // upper bound first differ, it always fits.
    let mut depth = anchor.depth() - 1;
    while !fits(depth) {
        depth = if depth < anchor.depth() { anchor.depth() } else { depth + 1 };
    }

    let base = anchor.coefficient(depth);
    let mut offset = BigInt::from(0);
    let mut out = Vec::with_capacity(tags.len());
    for _ in tags {
        out.push(anchor.with_coefficient(depth, &base + &offset));
        offset += &step;
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    Ok(out)
}

/// Convenience: the `m`-th of `n` tags between two finite tags.
pub fn between_tags(lower: &EcnTag, upper: &EcnTag, n: u64, m: u64) -> Result<EcnTag, AllocError> {
    let region = Region::new(lower.clone(), upper.clone()).map_err(|_| AllocError::EmptyRegion {
        lower: Bound::Tag(lower.clone()),
        upper: Bound::Tag(upper.clone()),
    })?;
    insert_between(&region, n, m)
}
