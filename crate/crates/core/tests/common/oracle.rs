//! Deliberately naive reference implementations, written straight from the
//! metric and objective definitions.

fn grams<'a>(t: &[&'a str], n: usize) -> Vec<Vec<&'a str>> {
    if t.len() < n {
        return Vec::new();
    }
    (0..=t.len() - n).map(|i| t[i..i + n].to_vec()).collect()
}

fn count(list: &[Vec<&str>], g: &[&str]) -> usize {
    list.iter().filter(|x| x.as_slice() == g).count()
}

/// Corpus BLEU with uniform weights.
pub fn bleu(cands: &[Vec<&str>], refs: &[Vec<Vec<&str>>], order: usize) -> f64 {
    let mut log_sum = 0.0;
    for n in 1..=order {
        let (mut hit, mut total) = (0usize, 0usize);
        for (c, rs) in cands.iter().zip(refs) {
            let cg = grams(c, n);
            total += cg.len();
            let mut done: Vec<Vec<&str>> = Vec::new();
            for g in &cg {
                if done.contains(g) {
                    continue;
                }
                done.push(g.clone());
                let best_ref = rs.iter().map(|r| count(&grams(r, n), g)).max().unwrap();
                hit += count(&cg, g).min(best_ref);
            }
        }
        if hit == 0 {
            return 0.0;
        }
        log_sum += (hit as f64 / total as f64).ln() / order as f64;
    }
    let c: usize = cands.iter().map(Vec::len).sum();
    let mut r = 0;
    for (cand, rs) in cands.iter().zip(refs) {
        let mut best = rs[0].len();
        for x in rs {
            let (d, bd) = (x.len().abs_diff(cand.len()), best.abs_diff(cand.len()));
            if d < bd || (d == bd && x.len() < best) {
                best = x.len();
            }
        }
        r += best;
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * log_sum.exp()
}

/// NIST with single references: information weights from reference
/// counts, clipped co-occurrences, brevity factor with 0.5 at 2/3 length.
pub fn nist(cands: &[Vec<&str>], refs: &[Vec<&str>], order: usize) -> f64 {
    let all_ref_grams = |n: usize| -> Vec<Vec<&str>> { refs.iter().flat_map(|r| grams(r, n)).collect() };
    let ref_tokens: usize = refs.iter().map(Vec::len).sum();
    let mut score = 0.0;
    for n in 1..=order {
        let here = all_ref_grams(n);
        let prefixes = if n > 1 { all_ref_grams(n - 1) } else { Vec::new() };
        let mut info_sum = 0.0;
        let mut total = 0usize;
        for (c, r) in cands.iter().zip(refs) {
            let cg = grams(c, n);
            let rg = grams(r, n);
            total += cg.len();
            let mut done: Vec<Vec<&str>> = Vec::new();
            for g in &cg {
                if done.contains(g) {
                    continue;
                }
                done.push(g.clone());
                let k = count(&cg, g).min(count(&rg, g));
                if k == 0 {
                    continue;
                }
                let prefix_count = if n == 1 { ref_tokens } else { count(&prefixes, &g[..n - 1]) };
                let info = (prefix_count as f64 / count(&here, g) as f64).log2();
                info_sum += k as f64 * info;
            }
        }
        if total > 0 {
            score += info_sum / total as f64;
        }
    }
    let c: f64 = cands.iter().map(Vec::len).sum::<usize>() as f64;
    let r: f64 = ref_tokens as f64;
    let x = (c / r).min(1.0);
    let beta = -(2.0f64.ln()) / (2.0f64 / 3.0).ln().powi(2);
    score * (beta * x.ln().powi(2)).exp()
}

pub fn levenshtein(a: &[&str], b: &[&str]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn every_shift<'a>(a: &[&'a str]) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    for start in 0..a.len() {
        for len in 1..=a.len() - start {
            let block = &a[start..start + len];
            let rest: Vec<&str> = a[..start].iter().chain(&a[start + len..]).copied().collect();
            for dest in 0..=rest.len() {
                if dest == start {
                    continue;
                }
                let mut v = rest[..dest].to_vec();
                v.extend_from_slice(block);
                v.extend_from_slice(&rest[dest..]);
                out.push(v);
            }
        }
    }
    out
}

/// Minimum of `shifts + Levenshtein` over every sequence of at most two
/// block shifts of any length.
pub fn ter_edits_two_shifts(cand: &[&str], reference: &[&str]) -> usize {
    let mut best = levenshtein(cand, reference);
    for once in every_shift(cand) {
        best = best.min(1 + levenshtein(&once, reference));
        for twice in every_shift(&once) {
            best = best.min(2 + levenshtein(&twice, reference));
        }
    }
    best
}

fn chunks(pairs: &[(usize, usize)]) -> usize {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    let mut c = 0;
    for (k, p) in sorted.iter().enumerate() {
        if k == 0 || !(p.0 == sorted[k - 1].0 + 1 && p.1 == sorted[k - 1].1 + 1) {
            c += 1;
        }
    }
    c
}

/// Enumerates every one-to-one exact-match alignment and returns the best
/// `(matches, chunks)`: most matches, then fewest chunks.
pub fn meteor_exact_alignment(cand: &[&str], reference: &[&str]) -> (usize, usize) {
    fn go(k: usize, cand: &[&str], reference: &[&str], used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, best: &mut (usize, usize)) {
        if k == cand.len() {
            let c = chunks(cur);
            if cur.len() > best.0 || (cur.len() == best.0 && c < best.1) {
                *best = (cur.len(), c);
            }
            return;
        }
        for j in 0..reference.len() {
            if !used[j] && reference[j] == cand[k] {
                used[j] = true;
                cur.push((k, j));
                go(k + 1, cand, reference, used, cur, best);
                cur.pop();
                used[j] = false;
            }
        }
        go(k + 1, cand, reference, used, cur, best);
    }
    let mut best = (0, usize::MAX);
    go(0, cand, reference, &mut vec![false; reference.len()], &mut Vec::new(), &mut best);
    if best.0 == 0 {
        (0, 0)
    } else {
        best
    }
}

/// Score from the METEOR formula with the linear fragmentation penalty.
pub fn meteor_score(matches: usize, chunks: usize, cand_len: usize, ref_len: usize) -> f64 {
    if matches == 0 {
        return 0.0;
    }
    let p = matches as f64 / cand_len as f64;
    let r = matches as f64 / ref_len as f64;
    (10.0 * p * r / (r + 9.0 * p)) * (1.0 - 0.5 * chunks as f64 / matches as f64)
}

/// Best objective over every monotone alignment, enumerated without
/// memoisation. Zero-likelihood cells cannot be paired.
pub fn best_alignment_objective(table: &[Vec<f64>], gap: f64) -> f64 {
    fn go(table: &[Vec<f64>], gap: f64, i: usize, j: usize) -> f64 {
        let (n, m) = (table.len(), table.first().map_or(0, Vec::len));
        if i == n && j == m {
            return 0.0;
        }
        let mut best = f64::NEG_INFINITY;
        if i < n {
            best = best.max(go(table, gap, i + 1, j) - gap);
        }
        if j < m {
            best = best.max(go(table, gap, i, j + 1) - gap);
        }
        if i < n && j < m && table[i][j] > 0.0 {
            best = best.max(go(table, gap, i + 1, j + 1) + table[i][j]);
        }
        best
    }
    go(table, gap, 0, 0)
}

/// Columns of a table whose rows may be empty still need a width.
pub fn best_alignment_objective_sized(table: &[Vec<f64>], n: usize, m: usize, gap: f64) -> f64 {
    if n == 0 {
        return -(m as f64) * gap;
    }
    if m == 0 {
        return -(n as f64) * gap;
    }
    best_alignment_objective(table, gap)
}

