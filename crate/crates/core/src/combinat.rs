//! Small combinatorial helpers shared by the form and Lie algebra modules.

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(n, k, i + 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of inversions of a list of distinct values, i.e. the parity of
/// the permutation that sorts it.
pub fn inversions(xs: &[usize]) -> usize {
    let mut n = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                n += 1;
            }
        }
    }
    n
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(n, prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_of_three() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps[0], vec![0, 1, 2]);
        assert_eq!(ps[5], vec![2, 1, 0]);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn subsets_in_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(subsets(5, 2).len(), binomial(5, 2));
    }

    #[test]
    fn inversion_parity() {
        assert_eq!(inversions(&[0, 1, 2]), 0);
        assert_eq!(inversions(&[2, 0, 1]), 2);
        assert_eq!(inversions(&[1, 0]), 1);
    }
}
