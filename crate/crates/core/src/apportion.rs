//! Largest-remainder apportionment: split an integer total in proportion to
//! weights so that the parts sum to the total exactly. Ties on the remainder
//! go to the earlier index.

use std::cmp::Ordering;

/// Apportions `total` proportionally to non-negative float weights.
pub fn largest_remainder(weights: &[f64], total: u64) -> Vec<u64> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let mut parts = Vec::with_capacity(weights.len());
    let mut fracs = Vec::with_capacity(weights.len());
    for &w in weights {
        let quota = total as f64 * (w / sum);
        let floor = quota.floor();
        parts.push(floor as u64);
        fracs.push(quota - floor);
    }
    let assigned: u64 = parts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    if assigned <= total {
        order.sort_by(|&a, &b| {
            fracs[b]
                .partial_cmp(&fracs[a])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut deficit = total - assigned;
        let mut i = 0;
        while deficit > 0 {
            // Float noise can leave the deficit above the count of entries.
            parts[order[i % order.len()]] += 1;
            deficit -= 1;
            i += 1;
        }
    } else {
        order.sort_by(|&a, &b| {
            fracs[a]
                .partial_cmp(&fracs[b])
                .unwrap_or(Ordering::Equal)
                .then(b.cmp(&a))
        });
        let mut surplus = assigned - total;
        for &i in order.iter().cycle() {
            if surplus == 0 {
                break;
            }
            if parts[i] > 0 {
                parts[i] -= 1;
                surplus -= 1;
            }
        }
    }
    parts
}

/// Exact integer version for weights that are themselves counts.
pub fn largest_remainder_exact(sizes: &[u64], total: u64) -> Vec<u64> {
    let sum: u128 = sizes.iter().map(|&s| s as u128).sum();
    if sum == 0 {
        return vec![0; sizes.len()];
    }
    let mut parts = Vec::with_capacity(sizes.len());
    let mut rems = Vec::with_capacity(sizes.len());
    for &s in sizes {
        let num = total as u128 * s as u128;
        parts.push((num / sum) as u64);
        rems.push(num % sum);
    }
    let assigned: u64 = parts.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| rems[b].cmp(&rems[a]).then(a.cmp(&b)));
    for &i in order.iter().take((total - assigned) as usize) {
        parts[i] += 1;
    }
    parts
}
