//! Lower convex hulls of one-dimensional rate curves, with the convex
//! combination that realizes each interpolated point.

use crate::rational::Rational;

/// A curve sample `(x, y)` carrying the parameter that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Knot<T> {
    pub x: Rational,
    pub y: Rational,
    pub tag: T,
}

/// Lower convex hull, sorted by `x`. For repeated `x` the smallest `y` wins
/// (first one on ties).
pub fn lower_hull<T: Clone>(mut knots: Vec<Knot<T>>) -> Vec<Knot<T>> {
    knots.sort_by(|a, b| a.x.cmp(&b.x).then(a.y.cmp(&b.y)));
    knots.dedup_by(|later, earlier| later.x == earlier.x);
    let mut hull: Vec<Knot<T>> = Vec::with_capacity(knots.len());
    for k in knots {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            // drop b when it is on or above the chord a-k
            let cross = (b.x - a.x) * (k.y - a.y) - (b.y - a.y) * (k.x - a.x);
            if cross <= Rational::ZERO {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Knot indices and weights reproducing the hull at `x`: one knot when
/// `x` is a knot, else its two neighbours. `None` outside the hull's range.
pub fn mixture_at<T>(hull: &[Knot<T>], x: Rational) -> Option<Vec<(usize, Rational)>> {
    let first = hull.first()?;
    let last = hull.last()?;
    if x < first.x || x > last.x {
        return None;
    }
    if let Some(i) = hull.iter().position(|k| k.x == x) {
        return Some(vec![(i, Rational::ONE)]);
    }
    let hi = hull.iter().position(|k| k.x > x)?;
    let (a, b) = (&hull[hi - 1], &hull[hi]);
    let w_hi = (x - a.x) / (b.x - a.x);
    Some(vec![(hi - 1, Rational::ONE - w_hi), (hi, w_hi)])
}

/// Hull value at `x`.
pub fn eval_hull<T>(hull: &[Knot<T>], x: Rational) -> Option<Rational> {
    Some(mixture_at(hull, x)?.into_iter().map(|(i, w)| w * hull[i].y).sum())
}
