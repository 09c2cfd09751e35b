//! Reproducible sets of grids.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{craftworld, officeworld, Domain, EnvError, Environment, GridSpec, Task};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub domain: Domain,
    pub seed: u64,
    pub grids: Vec<GridSpec>,
}

impl Dataset {
    pub fn generate(domain: Domain, size: usize, seed: u64) -> Result<Self, EnvError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(3);
        let grids = (0..size)
            .map(|_| match domain {
                Domain::OfficeWorld => officeworld::generate_officeworld(&mut rng),
                Domain::CraftWorld => craftworld::generate_craftworld(&mut rng),
            })
            .collect::<Result<_, _>>()?;
        Ok(Dataset {
            domain,
            seed,
            grids,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datasets serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, EnvError> {
        serde_json::from_str(text).map_err(|e| EnvError::Spec(e.to_string()))
    }

    pub fn environments(&self, task: Task) -> Result<Vec<Environment>, EnvError> {
        if task.domain() != self.domain {
            return Err(EnvError::Spec(format!(
                "{task} does not run on {} grids",
                self.domain
            )));
        }
        self.grids
            .iter()
            .map(|g| Environment::new(g.clone(), task))
            .collect()
    }
}
