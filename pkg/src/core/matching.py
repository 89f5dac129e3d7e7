"""
Hopcroft-Karp maximum-cardinality matching on bipartite graphs.

Left vertices are 0..num_left-1 and right vertices 0..num_right-1; adjacency order is
respected, so shuffling adjacency lists gives randomised maximum matchings.
"""
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

NIL = -1


class BipartiteGraph:
    """Adjacency-list bipartite graph G = ((L, R), E) with sequential vertex indices."""

    def __init__(self, num_left: int, num_right: int, edges: Sequence[Tuple[int, int]] = ()):
        self.num_left = int(num_left)
        self.num_right = int(num_right)
        self.adj: List[List[int]] = [[] for _ in range(self.num_left)]
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if not (0 <= u < self.num_left and 0 <= v < self.num_right):
            raise ValueError(f"edge ({u}, {v}) out of range")
        if v not in self.adj[u]:
            self.adj[u].append(v)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]], num_right: int) -> "BipartiteGraph":
        graph = cls(len(adjacency), num_right)
        graph.adj = [list(neighbours) for neighbours in adjacency]
        return graph


class HopcroftKarp:
    """
    Maximum matching by repeated shortest augmenting paths.

    Examples:
        >>> g = BipartiteGraph(2, 2, [(0, 0), (0, 1), (1, 0)])
        >>> sorted(HopcroftKarp(g)())
        [(0, 1), (1, 0)]
    """

    def __init__(self, graph: BipartiteGraph):
        self.graph = graph
        self.match_left = [NIL] * graph.num_left
        self.match_right = [NIL] * graph.num_right
        self.dist: Dict[int, int] = {}

    def _bfs(self) -> bool:
        queue = deque()
        inf = self.graph.num_left + 1
        for u in range(self.graph.num_left):
            if self.match_left[u] == NIL:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = inf
        self.dist[NIL] = inf
        while queue:
            u = queue.popleft()
            if self.dist[u] < self.dist[NIL]:
                for v in self.graph.adj[u]:
                    w = self.match_right[v]
                    if self.dist[w] == inf:
                        self.dist[w] = self.dist[u] + 1
                        queue.append(w)
        return self.dist[NIL] != inf

    def _dfs(self, root: int) -> bool:
        # iterative augmenting-path search; stack holds (left vertex, next adjacency index)
        inf = self.graph.num_left + 1
        stack = [[root, 0]]
        path: List[Tuple[int, int]] = []
        while stack:
            u, i = stack[-1]
            adj = self.graph.adj[u]
            advanced = False
            while i < len(adj):
                v = adj[i]
                i += 1
                w = self.match_right[v]
                if self.dist[w] == self.dist[u] + 1:
                    stack[-1][1] = i
                    path.append((u, v))
                    if w == NIL:
                        for pu, pv in path:
                            self.match_left[pu] = pv
                            self.match_right[pv] = pu
                        return True
                    stack.append([w, 0])
                    advanced = True
                    break
            if not advanced:
                self.dist[u] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    def __call__(self) -> List[Tuple[int, int]]:
        self.match_left = [NIL] * self.graph.num_left
        self.match_right = [NIL] * self.graph.num_right
        self.dist = {}
        while self._bfs():
            for u in range(self.graph.num_left):
                if self.match_left[u] == NIL:
                    self._dfs(u)
        return [(u, v) for u, v in enumerate(self.match_left) if v != NIL]


def perfect_matching(graph: BipartiteGraph) -> Optional[Dict[int, int]]:
    """Left -> right perfect matching, or None if the graph has none."""
    if graph.num_left != graph.num_right:
        return None
    matching = HopcroftKarp(graph)()
    if len(matching) != graph.num_left:
        return None
    return dict(matching)
