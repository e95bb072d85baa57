use crate::error::{Result, ThetaError};
use crate::packets::param::{block_ladder, RepParam, Side};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Range {
    Good,
    WeaklyFairOnly,
    NotWeaklyFair,
}

impl Range {
    pub fn is_weakly_fair(self) -> bool {
        self != Range::NotWeaklyFair
    }
}

/// Classifies a normalized `A_q(λ)` by comparing consecutive blocks.
pub fn range_classify(a: &RepParam) -> Range {
    let mut good = true;
    for w in a.blocks().windows(2) {
        if w[0].lambda < w[1].lambda {
            return Range::NotWeaklyFair;
        }
        // λ_i - λ_{i+1} ≥ (size_i + size_{i+1}) / 2, compared on twice-values
        let gap = (w[0].lambda - w[1].lambda).twice();
        if gap < (w[0].size() + w[1].size()) as i64 {
            good = false;
        }
    }
    if good {
        Range::Good
    } else {
        Range::WeaklyFairOnly
    }
}

/// Splits every compact block (`min(r, s) = 0`, size ≥ 2) into singletons by
/// induction in stages. When only singletons remain they are stably sorted
/// by decreasing value, which is the order of the discrete series parameter.
pub fn aq_normalize(a: &RepParam) -> Result<RepParam> {
    if !range_classify(a).is_weakly_fair() {
        return Err(ThetaError::invalid(format!(
            "{a} is not in the weakly fair range"
        )));
    }
    let mut blocks = Vec::with_capacity(a.dim());
    for b in a.blocks() {
        let side = match (b.r, b.s) {
            (r, 0) if r >= 2 => Side::P,
            (0, s) if s >= 2 => Side::Q,
            _ => {
                blocks.push(*b);
                continue;
            }
        };
        blocks.extend(block_ladder(b.lambda, b.size()).map(|v| side.block(v)));
    }
    if blocks.iter().all(|b| b.is_singleton()) {
        blocks.sort_by_key(|b| std::cmp::Reverse(b.lambda));
    }
    Ok(RepParam::new_unchecked(blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packets::param::Block;
    use crate::scalar::HalfInt;

    fn rep(blocks: &[(i64, usize, usize)]) -> RepParam {
        RepParam::new(
            blocks
                .iter()
                .map(|&(t, r, s)| Block::new(HalfInt::from_twice(t), r, s))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        // n = 3: singleton values in Z, size-2 values in Z + 1/2
        assert_eq!(range_classify(&rep(&[(6, 1, 0), (1, 1, 1)])), Range::Good);
        assert_eq!(
            range_classify(&rep(&[(2, 1, 0), (1, 1, 1)])),
            Range::WeaklyFairOnly
        );
        assert_eq!(
            range_classify(&rep(&[(-1, 1, 0), (1, 1, 0)])),
            Range::NotWeaklyFair
        );
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            aq_normalize(&rep(&[(0, 3, 0)])).unwrap(),
            rep(&[(2, 1, 0), (0, 1, 0), (-2, 1, 0)])
        );
        let single = rep(&[(2, 1, 0)]);
        assert_eq!(aq_normalize(&single).unwrap(), single);
        let mixed = rep(&[(0, 1, 1)]);
        assert_eq!(aq_normalize(&mixed).unwrap(), mixed);
        assert!(aq_normalize(&rep(&[(-1, 1, 0), (1, 1, 0)])).is_err());
    }

    #[test]
    fn normalize_is_idempotent_on_compact_blocks() {
        let a = rep(&[(2, 0, 2), (-2, 0, 2)]);
        let once = aq_normalize(&a).unwrap();
        assert_eq!(aq_normalize(&once).unwrap(), once);
    }
}
