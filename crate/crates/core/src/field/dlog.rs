use std::collections::HashMap;

use super::{Elem, FieldCtx};

/// Baby-step giant-step: smallest `k < order` with `base^k = target`, where
/// `order` is the order of `base`.
pub fn bsgs(ctx: &FieldCtx, base: Elem, target: Elem, order: u64) -> Option<u64> {
    if target.is_zero() || base.is_zero() {
        return None;
    }
    let step = (order as f64).sqrt().ceil() as u64;
    let step = step.max(1);
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = Elem::ONE;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = ctx.mul(cur, base);
    }
    let giant = ctx.inv(ctx.pow(base, step))?;
    let mut gamma = target;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            let k = i * step + j;
            if k < order {
                return Some(k);
            }
        }
        gamma = ctx.mul(gamma, giant);
    }
    None
}
