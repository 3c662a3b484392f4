//! Monotone triangles with arbitrary integer bottom rows.
//!
//! A monotone triangle of size `n` is a triangular array in which every row
//! interlaces the row below it. For strictly increasing bottom rows this is
//! the classic notion (and all signs are positive); in general a triangle
//! carries a sign read off from its strict row descents and its
//! double-touch patterns.

use serde_json::json;

use crate::cache::Memo;
use crate::element::{Element, Sign};
use crate::set::SignedSet;
use crate::{Error, Result};

/// Whether `l` interlaces `k` (written `l ≺ k`), per the four conditions:
/// every `l_i` lies in the closed interval between `k_i` and `k_{i+1}`,
/// a weakly increasing triple forbids a double touch, and an `l_i` equal to
/// the smaller endpoint of a decreasing pair must be repeated on the
/// appropriate side.
pub fn interlaces(l: &[i64], k: &[i64]) -> bool {
    let n = k.len();
    if l.len() + 1 != n {
        return false;
    }
    for i in 0..n - 1 {
        if l[i] < k[i].min(k[i + 1]) || l[i] > k[i].max(k[i + 1]) {
            return false;
        }
    }
    for i in 1..n.saturating_sub(1) {
        if k[i - 1] <= k[i] && k[i] <= k[i + 1] && l[i - 1] == k[i] && l[i] == k[i] {
            return false;
        }
    }
    for i in 0..n - 1 {
        if k[i] > l[i] && l[i] == k[i + 1] {
            // condition (3): forced repeat to the right
            if i + 3 > n || l[i + 1] != l[i] {
                return false;
            }
        }
        if k[i] == l[i] && l[i] > k[i + 1] {
            // condition (4): forced repeat to the left
            if i == 0 || l[i - 1] != l[i] {
                return false;
            }
        }
    }
    true
}

fn row_descents(row: &[i64]) -> usize {
    row.windows(2).filter(|w| w[0] > w[1]).count()
}

/// Double-touch patterns between an upper row `l` and its lower row `k`:
/// positions with `k_j > l_j = k_{j+1} = l_{j+1} > k_{j+2}`.
fn double_touches(l: &[i64], k: &[i64]) -> usize {
    let m = k.len();
    (0..m.saturating_sub(2))
        .filter(|&j| k[j] > l[j] && l[j] == k[j + 1] && k[j + 1] == l[j + 1] && l[j + 1] > k[j + 2])
        .count()
}

static INTERLACING_ROWS: Memo<Vec<i64>, std::sync::Arc<Vec<Vec<i64>>>> = Memo::new();

/// All rows interlacing `k`, in lexicographic order.
pub fn interlacing_rows(k: &[i64]) -> std::sync::Arc<Vec<Vec<i64>>> {
    INTERLACING_ROWS.get_or(k.to_vec(), || {
        let n = k.len();
        let mut out = Vec::new();
        if n < 2 {
            return std::sync::Arc::new(out);
        }
        let ranges: Vec<(i64, i64)> = (0..n - 1)
            .map(|i| (k[i].min(k[i + 1]), k[i].max(k[i + 1])))
            .collect();
        let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            if interlaces(&cur, k) {
                out.push(cur.clone());
            }
            let mut pos = n - 1;
            loop {
                if pos == 0 {
                    return std::sync::Arc::new(out);
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] <= ranges[pos].1 {
                    break;
                }
                cur[pos] = ranges[pos].0;
            }
        }
    })
}

/// Sign of a triangle given as top-first rows.
pub fn triangle_sign(rows: &[Vec<i64>]) -> Sign {
    let mut r = 0;
    for row in rows {
        r += row_descents(row);
    }
    for w in rows.windows(2) {
        r += double_touches(&w[0], &w[1]);
    }
    Sign::from_parity(r)
}

pub(crate) fn for_each_triangle(bottom: &[i64], f: &mut dyn FnMut(Element, Sign)) {
    fn rec(bottom: &[i64], f: &mut dyn FnMut(Vec<Element>, Sign)) {
        if bottom.len() <= 1 {
            f(vec![Element::int_row(bottom)], Sign::Pos);
            return;
        }
        let own = Sign::from_parity(row_descents(bottom));
        for l in interlacing_rows(bottom).iter() {
            let local = own * Sign::from_parity(double_touches(l, bottom));
            rec(l, &mut |mut rows, s| {
                rows.push(Element::int_row(bottom));
                f(rows, s * local);
            });
        }
    }
    rec(bottom, &mut |rows, s| f(Element::tuple(rows), s));
}

/// Rows of a triangle element, top first, with shape validation.
pub fn triangle_rows(e: &Element) -> Result<Vec<Vec<i64>>> {
    let rows = e.expect_tuple()?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_int_row()
            .ok_or_else(|| Error::Validation(format!("triangle row {} is not an integer row", i + 1)))?;
        if row.len() != i + 1 {
            return Err(Error::Validation(format!(
                "triangle row {} has length {}, expected {}",
                i + 1,
                row.len(),
                i + 1
            )));
        }
        out.push(row);
    }
    Ok(out)
}

pub(crate) fn triangle_member_sign(bottom: &[i64], e: &Element) -> Option<Sign> {
    let rows = triangle_rows(e).ok()?;
    if rows.len() != bottom.len() || rows.last()? != bottom {
        return None;
    }
    for w in rows.windows(2) {
        if !interlaces(&w[0], &w[1]) {
            return None;
        }
    }
    Some(triangle_sign(&rows))
}

static TRIANGLE_COUNTS: Memo<Vec<i64>, (u128, i128)> = Memo::new();

/// `(unsigned count, signed count)` of triangles with the given bottom row,
/// by memoized recursion over interlacing rows.
pub fn triangle_tally(bottom: &[i64]) -> (u128, i128) {
    TRIANGLE_COUNTS.get_or(bottom.to_vec(), || {
        if bottom.len() <= 1 {
            return (1, 1);
        }
        let own = Sign::from_parity(row_descents(bottom));
        let mut unsigned = 0u128;
        let mut signed = 0i128;
        for l in interlacing_rows(bottom).iter() {
            let (u, s) = triangle_tally(l);
            let local = own * Sign::from_parity(double_touches(l, bottom));
            unsigned += u;
            signed += s * local.as_i8() as i128;
        }
        (unsigned, signed)
    })
}

pub(crate) fn triangle_counts(bottom: &[i64]) -> (u128, u128) {
    let (unsigned, signed) = triangle_tally(bottom);
    let pos = (unsigned as i128 + signed) / 2;
    let neg = (unsigned as i128 - signed) / 2;
    (pos as u128, neg as u128)
}

static MT_SETS: Memo<Vec<i64>, SignedSet> = Memo::new();

/// The signed set of all monotone triangles with bottom row `k`.
pub fn mt_set(k: &[i64]) -> SignedSet {
    MT_SETS.get_or(k.to_vec(), || SignedSet::triangles(k.to_vec()))
}

/// JSON view of a triangle: `{"rows": [[..], ..]}`.
pub fn triangle_to_json(e: &Element) -> Result<serde_json::Value> {
    Ok(json!({ "rows": triangle_rows(e)? }))
}

pub fn triangle_from_json(v: &serde_json::Value) -> Result<Element> {
    let rows = v
        .get("rows")
        .and_then(|r| r.as_array())
        .ok_or_else(|| Error::Validation("triangle JSON needs a \"rows\" array".into()))?;
    let mut out = Vec::new();
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Validation("triangle row must be an array".into()))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::Validation("triangle entries must be integers".into()))
            })
            .collect::<Result<Vec<i64>>>()?;
        out.push(Element::int_row(&row));
    }
    let elem = Element::tuple(out);
    triangle_rows(&elem)?;
    Ok(elem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interlacing_examples() {
        assert!(interlaces(&[1, 2], &[1, 2, 3]));
        assert!(!interlaces(&[2, 2], &[1, 2, 3]));
        // rows of the size-5 example triangle
        assert!(interlaces(&[3, 3, 4, 5], &[5, 3, 1, 4, 6]));
        assert!(interlaces(&[3, 4, 5], &[3, 3, 4, 5]));
        assert!(interlaces(&[3, 5], &[3, 4, 5]));
        assert!(interlaces(&[4], &[3, 5]));
        // condition (3) needs room to the right: k1 > l1 = k2 fails for n=2
        assert!(!interlaces(&[2], &[4, 2]));
    }

    #[test]
    fn strictly_increasing_bottom_rows_are_classic() {
        // all triangles positive, counts match the unsigned count
        let (pos, neg) = triangle_counts(&[1, 2, 3]);
        assert_eq!((pos, neg), (7, 0));
        let (pos, neg) = triangle_counts(&[1, 2, 3, 4, 5]);
        assert_eq!((pos, neg), (429, 0));
    }

    #[test]
    fn enumeration_matches_tally() {
        for k in [
            vec![1, 2, 3],
            vec![2, 1],
            vec![0, 2, 1],
            vec![3, 1, 2],
            vec![-1, 1, 0, 2],
        ] {
            let mut unsigned = 0u128;
            let mut signed = 0i128;
            for_each_triangle(&k, &mut |_, s| {
                unsigned += 1;
                signed += s.as_i8() as i128;
            });
            assert_eq!((unsigned, signed), triangle_tally(&k), "bottom {k:?}");
        }
    }

    #[test]
    fn paper_example_triangle_has_sign_minus_one() {
        let rows = vec![
            vec![4],
            vec![3, 5],
            vec![3, 4, 5],
            vec![3, 3, 4, 5],
            vec![5, 3, 1, 4, 6],
        ];
        assert_eq!(triangle_sign(&rows), Sign::Neg);
        // and it is a member of MT(5,3,1,4,6)
        let e = Element::tuple(rows.iter().map(|r| Element::int_row(r)).collect());
        assert_eq!(
            triangle_member_sign(&[5, 3, 1, 4, 6], &e),
            Some(Sign::Neg)
        );
    }

    #[test]
    fn member_rejects_malformed() {
        let e = Element::tuple(vec![Element::int_row(&[1, 2])]);
        assert_eq!(triangle_member_sign(&[1, 2], &e), None);
        let e = Element::tuple(vec![
            Element::int_row(&[9]),
            Element::int_row(&[1, 2]),
        ]);
        assert_eq!(triangle_member_sign(&[1, 2], &e), None);
    }

    #[test]
    fn mt_set_counts_via_set_api() {
        assert_eq!(mt_set(&[1, 2, 3]).counts(), (7, 0));
        assert_eq!(mt_set(&[1, 2, 3]).size(), 7);
    }

    #[test]
    fn triangle_json_round_trip() {
        let e = Element::tuple(vec![
            Element::int_row(&[2]),
            Element::int_row(&[1, 2]),
        ]);
        let v = triangle_to_json(&e).unwrap();
        assert_eq!(triangle_from_json(&v).unwrap(), e);
    }
}
