"""nzflow: nowhere-zero Z3-flows on Cayley multigraphs.

Library layout:

* ``groups`` -- table groups and the two structured group families
* ``graphs`` -- multigraphs, Cayley construction, quotients, predicates
* ``flows`` -- Z3-flow verification, transforms, oracle, lifting lemmas
* ``pseudoforest`` -- (0,1)-orientations and partition certificates
* ``ladders`` -- closed ladders and the spanning-ladder composition
* ``constructions`` -- the four 5-valent graph families and their flows
* ``cli`` -- command-line surface
"""

__version__ = "0.1.0"
