"""Book embeddings: exact SAT search, verification and a planar construction."""

from bookembed.embedding import BookEmbedding, verify
from bookembed.graph import Graph, make_graph, named_graph
from bookembed.solver import decide_dbt, embed

__all__ = ["BookEmbedding", "Graph", "decide_dbt", "embed", "make_graph", "named_graph", "verify"]
