use std::collections::HashMap;

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<char, usize>,
    id: Option<u32>,
}

/// Character trie over vocabulary surfaces, used for prefix matching in the
/// segmentation lattice.
#[derive(Debug, Clone)]
pub(crate) struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    pub(crate) fn build<'a>(surfaces: impl IntoIterator<Item = (&'a str, u32)>) -> Self {
        let mut nodes = vec![Node::default()];
        for (surface, id) in surfaces {
            let mut at = 0;
            for c in surface.chars() {
                at = match nodes[at].children.get(&c) {
                    Some(&next) => next,
                    None => {
                        nodes.push(Node::default());
                        let next = nodes.len() - 1;
                        nodes[at].children.insert(c, next);
                        next
                    }
                };
            }
            nodes[at].id = Some(id);
        }
        Trie { nodes }
    }

    /// Calls `f(id, char_len)` for every surface that is a prefix of `chars`.
    pub(crate) fn for_each_prefix(&self, chars: &[char], mut f: impl FnMut(u32, usize)) {
        let mut at = 0;
        for (i, c) in chars.iter().enumerate() {
            match self.nodes[at].children.get(c) {
                Some(&next) => at = next,
                None => return,
            }
            if let Some(id) = self.nodes[at].id {
                f(id, i + 1);
            }
        }
    }
}
