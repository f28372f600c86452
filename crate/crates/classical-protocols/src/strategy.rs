use num_rational::Rational64;
use num_traits::{One, Zero};
use prob_model::{Entry, ExactTable, ProbTable};
use relation::{CliqueLabel, Tuple};
use serde_json::{json, Value};

/// Encoder `(C_x, a) -> message` with a per-`(message, C_y)` output distribution.
///
/// CCR strategies have one-hot decoder rows; S-CCR strategies spread Bob's
/// output over every valid label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub n: usize,
    pub omega: usize,
    pub m: usize,
    /// `encoder[(x-1)*omega + a]`
    pub encoder: Vec<usize>,
    /// `decoder[msg][y-1][b]`
    pub decoder: Vec<Vec<Vec<Rational64>>>,
}

impl DeterministicStrategy {
    /// Strategy from per-clique bijections `sigma_x: message -> label`.
    pub fn from_perms(perms: &[Vec<usize>]) -> Self {
        let n = perms.len();
        let omega = perms[0].len();
        let mut encoder = vec![0; n * omega];
        for (x, p) in perms.iter().enumerate() {
            for (msg, &a) in p.iter().enumerate() {
                encoder[x * omega + a] = msg;
            }
        }
        let decoder = (0..omega)
            .map(|msg| perms.iter().map(|p| one_hot(omega, p[msg])).collect())
            .collect();
        DeterministicStrategy { n, omega, m: omega, encoder, decoder }
    }

    pub fn encode(&self, x: usize, a: usize) -> usize {
        self.encoder[(x - 1) * self.omega + a]
    }

    pub fn table(&self) -> ExactTable {
        ProbTable::from_fn(self.n, self.omega, |t: Tuple| {
            self.decoder[self.encode(t.x, t.a)][t.y - 1][t.b]
        })
    }

    pub fn has_deterministic_decoder(&self) -> bool {
        self.decoder.iter().flatten().all(|d| d.iter().all(|p| p.is_zero() || p.is_one()))
    }

    /// `tau(i)`: the inputs encoded into message `i`.
    pub fn partition(&self) -> Vec<Vec<CliqueLabel>> {
        let mut out = vec![Vec::new(); self.m];
        for x in 1..=self.n {
            for a in 0..self.omega {
                out[self.encode(x, a)].push(CliqueLabel { x, a });
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut enc = Vec::new();
        for x in 1..=self.n {
            for a in 0..self.omega {
                enc.push(json!([x, a, self.encode(x, a)]));
            }
        }
        let mut dec = Vec::new();
        for (msg, per_y) in self.decoder.iter().enumerate() {
            for (y, dist) in per_y.iter().enumerate() {
                let out = match dist.iter().position(|p| p.is_one()) {
                    Some(b) => json!(b),
                    None => Value::Array(dist.iter().map(|p| p.to_json()).collect()),
                };
                dec.push(json!([msg, y + 1, out]));
            }
        }
        json!({ "m": self.m, "encoder": enc, "decoder": dec })
    }
}

pub(crate) fn one_hot(omega: usize, b: usize) -> Vec<Rational64> {
    (0..omega)
        .map(|i| Rational64::from_integer((i == b) as i64))
        .collect()
}

/// Strategies shared through a public coin, with positive rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicCoinMixture {
    pub members: Vec<(DeterministicStrategy, Rational64)>,
}

impl PublicCoinMixture {
    pub fn uniform(strategies: Vec<DeterministicStrategy>) -> Self {
        let k = strategies.len() as i64;
        PublicCoinMixture {
            members: strategies.into_iter().map(|s| (s, Rational64::new(1, k))).collect(),
        }
    }

    /// Number of coin outcomes.
    pub fn coin_size(&self) -> usize {
        self.members.len()
    }

    pub fn table(&self) -> ExactTable {
        let tables: Vec<ExactTable> = self.members.iter().map(|(s, _)| s.table()).collect();
        let parts: Vec<(&ExactTable, Rational64)> =
            tables.iter().zip(&self.members).map(|(t, (_, w))| (t, *w)).collect();
        ProbTable::mix(&parts)
    }

    pub fn to_json(&self) -> Value {
        let members: Vec<Value> = self
            .members
            .iter()
            .map(|(s, w)| {
                let mut v = s.to_json();
                v["weight"] = w.to_json();
                v
            })
            .collect();
        json!({ "coin_size": self.coin_size(), "strategies": members })
    }
}
