"""Max-flow edge vitality for unweighted undirected planar graphs."""
