MAX_VERTICES = 64

# Periods past the certified start that `certify` compares with exact values.
REPLAY_PERIODS = 3

# Harness instance caps on realized graph size.
GENERAL_SOLVE_CAP = 22
STAR_SOLVE_CAP = 40

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

CSG_LOGGER_NAME = 'csg'

# A seven-vertex CSG({1,2,4}) example game, vertices 1..7 relabeled 0..6.
EXAMPLE_GAME_GRAPH_SPEC = 'edges:0-1,1-2,2-3,1-4,4-6,5-6,1-5'
EXAMPLE_GAME_L = (1, 2, 4)

SUBTRACTION_247 = (2, 4, 7)
SUBTRACTION_247_SEQUENCE = '00112203(102)'

# Grundy values of S(1^t, k) under I_4, rows k = 0..8, columns t = 0..10.
TABLE_S1TK_N4: tuple[tuple[int, ...], ...] = (
    (1, 2, 3, 2, 0, 1, 0, 1, 0, 1, 0),
    (2, 3, 2, 0, 1, 0, 1, 0, 1, 0, 1),
    (3, 4, 0, 1, 2, 3, 2, 3, 2, 3, 2),
    (4, 0, 1, 4, 3, 2, 3, 2, 3, 2, 3),
    (0, 1, 5, 3, 4, 5, 4, 5, 4, 5, 4),
    (1, 2, 3, 2, 0, 1, 0, 1, 0, 1, 0),
    (2, 3, 2, 0, 1, 0, 1, 0, 1, 0, 1),
    (3, 4, 0, 1, 2, 3, 2, 3, 2, 3, 2),
    (4, 0, 1, 4, 3, 2, 3, 2, 3, 2, 3),
)

# Subdivided stars reachable from S(3,3,3) under CSG({1,2,4}) and their Grundy values.
S333_SUBSTARS_124: dict[tuple[int, ...], int] = {
    (3, 3, 3): 1,
    (3, 3, 2): 0,
    (3, 3, 1): 2,
    (3, 2, 2): 2,
    (3, 2, 1): 1,
    (3, 3): 1,
    (3, 1, 1): 0,
    (2, 2, 2): 1,
    (2, 2, 1): 0,
    (3, 2): 0,
    (2, 2): 2,
}

# Small stars whose CSG({1,2,4}) value is |G| mod 3.
SMALL_STARS_124_SIZE_MOD_3: tuple[tuple[int, ...], ...] = (
    (1, 1, 1),
    (1, 1, 2),
    (1, 1, 3),
    (1, 1, 1, 3),
    (1, 2, 2),
    (1, 2, 3),
    (1, 1, 2, 2),
    (1, 1, 2, 3),
)
SMALL_STARS_124_EXCEPTIONS: dict[tuple[int, ...], int] = {
    (1, 1, 1, 1): 0,
    (1, 1, 1, 2): 3,
}

# CSG({1,2,4}) star families S(fixed..., k): the value repeats with period 3 in k.
FAMILIES_124: dict[str, tuple[tuple[int, ...], str]] = {
    'S11k': ((1, 1), '012'),
    'S111k': ((1, 1, 1), '103'),
    'S12k': ((1, 2), '120'),
    'S112k': ((1, 1, 2), '231'),
    'S22k': ((2, 2), '201'),
    'S122k': ((1, 2, 2), '012'),
    'S1111k': ((1, 1, 1, 1), '012'),
}

# CSG(1,2,3) star families S(fixed..., k) whose value is |G| mod 4.
FAMILIES_123: dict[str, tuple[int, ...]] = {
    'S0k': (),
    'S1k': (1,),
    'S11k': (1, 1),
    'S111k': (1, 1, 1),
    'S12k': (1, 2),
}

# Anchor values of the three-branch star S(1, k, l) under I_8.
S1KL_ANCHORS_N8: dict[tuple[int, int], int] = {
    (8, 2): 10,
    (8, 11): 6,
}

DEFAULT_SUITE = (
    'paths',
    'table-s1tk',
    'table-s1kl',
    's1kl',
    'lifting',
    'thm-123',
    'thm-124',
    'families-124',
    'obs-plus-m',
    'certify',
)
EXTRA_SUITE = ('claim-2n',)
