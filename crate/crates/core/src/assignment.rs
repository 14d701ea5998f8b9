//! Square linear assignment (Hungarian method, O(d³)).

/// Minimum-cost perfect matching on a square integer cost matrix.
/// Returns `assign` with `assign[row] = col` and the total cost.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    debug_assert!(cost.iter().all(|r| r.len() == n));
    // potentials method on 1-indexed arrays; column 0 is a sentinel
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    let total = assign.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (assign, total)
}

/// Maximum-weight assignment, choosing the lexicographically smallest
/// `assign` vector among all optima.
pub fn max_weight_assignment_lex(weight: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = weight.len();
    let neg: Vec<Vec<i64>> = weight.iter().map(|r| r.iter().map(|&w| -w).collect()).collect();
    let (_, best_cost) = min_cost_assignment(&neg);
    let best = -best_cost;

    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut fixed_weight = 0i64;
    for row in 0..n {
        let mut chosen = None;
        for col in 0..n {
            if used[col] {
                continue;
            }
            used[col] = true;
            let rest = remaining_best(weight, row + 1, &used);
            used[col] = false;
            if fixed_weight + weight[row][col] + rest == best {
                chosen = Some(col);
                break;
            }
        }
        let col = chosen.expect("some completion attains the optimum");
        used[col] = true;
        fixed_weight += weight[row][col];
        fixed.push(col);
    }
    (fixed, best)
}

/// Best weight for rows `start..` over the columns not yet used.
fn remaining_best(weight: &[Vec<i64>], start: usize, used: &[bool]) -> i64 {
    let rows: Vec<usize> = (start..weight.len()).collect();
    let cols: Vec<usize> = (0..weight.len()).filter(|&c| !used[c]).collect();
    debug_assert_eq!(rows.len(), cols.len());
    let sub: Vec<Vec<i64>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| -weight[r][c]).collect())
        .collect();
    -min_cost_assignment(&sub).1
}
