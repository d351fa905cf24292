use super::serre::SerreGraph;
use crate::group::word::Word;
use crate::{Error, Result};

/// A map of Serre graphs: darts to darts, compatible with endpoints and reversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    source: SerreGraph,
    target: SerreGraph,
    vertex_map: Vec<usize>,
    dart_map: Vec<usize>,
}

impl GraphMorphism {
    pub fn new(source: SerreGraph, target: SerreGraph, vertex_map: Vec<usize>, dart_map: Vec<usize>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMorphism(m));
        if vertex_map.len() != source.vertex_count() || dart_map.len() != source.dart_count() {
            return bad("map sizes do not match the source".into());
        }
        if vertex_map.iter().any(|&v| v >= target.vertex_count()) || dart_map.iter().any(|&d| d >= target.dart_count()) {
            return bad("map leaves the target".into());
        }
        for d in 0..source.dart_count() {
            let fd = dart_map[d];
            if target.origin(fd) != vertex_map[source.origin(d)] {
                return bad(format!("dart {} breaks the origin map", source.dart_name(d)));
            }
            if dart_map[d ^ 1] != fd ^ 1 {
                return bad(format!("dart {} breaks reversal", source.dart_name(d)));
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            dart_map,
        })
    }

    /// Morphism determined by an edge map; `edge_map[e] = (target dart of 2e)`.
    pub fn from_edge_map(source: SerreGraph, target: SerreGraph, vertex_map: Vec<usize>, edge_map: &[usize]) -> Result<Self> {
        let dart_map = edge_map.iter().flat_map(|&d| [d, d ^ 1]).collect();
        Self::new(source, target, vertex_map, dart_map)
    }

    pub fn identity(g: &SerreGraph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            dart_map: (0..g.dart_count()).collect(),
        }
    }

    pub fn source(&self) -> &SerreGraph {
        &self.source
    }

    pub fn target(&self) -> &SerreGraph {
        &self.target
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn dart(&self, d: usize) -> usize {
        self.dart_map[d]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn dart_map(&self) -> &[usize] {
        &self.dart_map
    }

    pub fn preserves_base(&self) -> bool {
        self.vertex_map[self.source.base()] == self.target.base()
    }

    /// `self` then `next`.
    pub fn then(&self, next: &GraphMorphism) -> Result<GraphMorphism> {
        if self.target != next.source {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        GraphMorphism::new(
            self.source.clone(),
            next.target.clone(),
            self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            self.dart_map.iter().map(|&d| next.dart_map[d]).collect(),
        )
    }

    pub fn map_path(&self, path: &[usize]) -> Vec<usize> {
        path.iter().map(|&d| self.dart_map[d]).collect()
    }

    /// Images of the source's fundamental-group generators as words in the target's
    /// fundamental group. Requires a base-preserving morphism of connected graphs.
    pub fn pi1_images(&self) -> Result<Vec<Word>> {
        if !self.preserves_base() {
            return Err(Error::InvalidMorphism("morphism does not preserve the base".into()));
        }
        let sp = self.source.pi1()?;
        let tp = self.target.pi1()?;
        (0..sp.rank())
            .map(|k| tp.loop_word(&self.map_path(&sp.generator_loop(k))))
            .collect()
    }

    /// Whether every star maps bijectively onto the star of the image vertex.
    pub fn is_star_bijective(&self) -> bool {
        let tstars = self.target.stars();
        self.source.stars().iter().enumerate().all(|(v, star)| {
            let mut img: Vec<usize> = star.iter().map(|&d| self.dart_map[d]).collect();
            img.sort_unstable();
            img == tstars[self.vertex_map[v]]
        })
    }

    pub fn is_surjective_on_vertices(&self) -> bool {
        let mut hit = vec![false; self.target.vertex_count()];
        for &v in &self.vertex_map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_and_composes() {
        let c4 = SerreGraph::cycle(4);
        let c2 = SerreGraph::cycle(2);
        // wrap the 4-cycle twice around the 2-cycle
        let f = GraphMorphism::from_edge_map(c4.clone(), c2.clone(), vec![0, 1, 0, 1], &[0, 2, 0, 2]).unwrap();
        assert!(f.is_star_bijective());
        assert_eq!(f.pi1_images().unwrap(), vec![Word::generator(0).pow(2)]);
        let id = GraphMorphism::identity(&c2);
        assert_eq!(f.then(&id).unwrap(), f);
        assert!(GraphMorphism::from_edge_map(c4, c2, vec![0, 1, 0, 1], &[0, 0, 0, 2]).is_err());
    }
}
