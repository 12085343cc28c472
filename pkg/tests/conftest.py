import pytest

from torpure.fans import Fan, FanMatrix

VHAT = [[1, -1, 2, -3, -1], [1, -1, -1, 2, -1], [1, 1, 1, 1, -5]]
V_IMPURE = [[1, -1, 2, -3, -1], [1, -1, -1, 2, -1], [2, 2, 2, 2, -10]]
V_PURE = [[1, -1, 2, -3, -1], [2, -2, -2, 4, -2], [1, 1, 1, 1, -5]]
Q_GIVEN = [[3, 1, 10, 6, 4], [3, 2, 0, 0, 1]]
GAMMA_IMPURE = [[0, 1, 1, 1, 0]]
GAMMA_PURE = [[0, 0, 0, 1, 1]]

SIGMA1 = [(1, 2, 3), (1, 2, 4), (2, 4, 5), (1, 4, 5), (2, 3, 5), (1, 3, 5)]
SIGMA2 = [(1, 3, 4), (2, 3, 4), (2, 4, 5), (1, 4, 5), (2, 3, 5), (1, 3, 5)]

C_X = [[40, 0, 0, 0, 0], [0, 60, 0, 0, 0], [0, 0, 3, 0, 0],
       [-24, -24, 0, 1, 0], [-9, -47, -2, 0, 1]]
C_XP = [[40, 0, 0, 0, 0], [0, 60, 0, 0, 0], [-20, -30, 3, 0, 0],
        [-8, -48, 0, 2, 0], [15, 37, -2, -1, 1]]

V_NC = [[1, 0, 0, 0, 0, -1, 1], [0, 1, 0, 0, -1, -1, 2],
        [0, 0, 1, 0, -1, 0, 1], [0, 0, 0, 1, -1, -1, 1]]
SIGMA_NC = [(2, 3, 4, 6), (2, 4, 5, 7), (1, 4, 5, 6)]

P2 = [(1, 0), (0, 1), (-1, -1)]
P121 = [(1, 0), (0, 1), (-1, -2)]
TRIANGLE = [(1, 2), (2, 3), (1, 3)]


@pytest.fixture
def vhat():
    return FanMatrix.from_rows(VHAT)


@pytest.fixture
def v_impure():
    return FanMatrix.from_rows(V_IMPURE)


@pytest.fixture
def v_pure():
    return FanMatrix.from_rows(V_PURE)


@pytest.fixture
def v_nc():
    return FanMatrix.from_rows(V_NC)


@pytest.fixture
def fan_nc(v_nc):
    return Fan(v_nc, SIGMA_NC)


@pytest.fixture
def p2():
    V = FanMatrix(P2)
    return Fan(V, TRIANGLE)


@pytest.fixture
def p121():
    V = FanMatrix(P121)
    return Fan(V, TRIANGLE)
