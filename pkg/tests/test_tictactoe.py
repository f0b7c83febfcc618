import random

import pytest

from replayq.envs import EnvResponse
from replayq.tictactoe import (
    CELL_ACTIONS,
    EMPTY_BOARD,
    legal_cells,
    reachable_boards,
    tictactoe_environment,
    tictactoe_step,
    ttt_generate_games,
    ttt_winner,
)


def test_winner_cases():
    assert ttt_winner(EMPTY_BOARD) == "ongoing"
    assert ttt_winner("XXX.BB...") == "X-wins"
    assert ttt_winner("B.XB.XB..") == "B-wins"
    assert ttt_winner("X...X..BX") == "X-wins"  # main diagonal
    assert ttt_winner("XXBBBXXXB") == "draw"
    assert ttt_winner("XB.BX.X..") == "ongoing"


def test_winner_rejects_malformed_boards():
    with pytest.raises(ValueError):
        ttt_winner("XXXX")
    with pytest.raises(ValueError):
        ttt_winner("XXOXXOXXO")
    with pytest.raises(ValueError, match="both players"):
        ttt_winner("XXXBBB...")


def test_legal_cells_lists_open_positions():
    assert legal_cells(EMPTY_BOARD) == list(range(9))
    assert legal_cells("XB.BX.X..") == [2, 5, 7, 8]
    assert legal_cells("XXBBBXXXB") == []


def test_generate_games_validates_count():
    with pytest.raises(ValueError):
        ttt_generate_games(0)


def test_generate_games_is_seeded():
    assert ttt_generate_games(20, seed=5) == ttt_generate_games(20, seed=5)
    assert ttt_generate_games(20, seed=5) != ttt_generate_games(20, seed=6)


def test_generated_tuples_respect_board_invariants():
    tuples = ttt_generate_games(300, seed=9)
    for t in tuples:
        # the mover is always X, so marks are balanced before every move
        assert t.state.count("X") == t.state.count("B")
        assert ttt_winner(t.state) == "ongoing"
        cell = CELL_ACTIONS.index(t.action)
        assert t.state[cell] == "."
        assert t.next_state[cell] == "X"
        assert t.reward in (1.0, 0.0, -1.0)


def test_generated_games_chain_and_terminate():
    tuples = ttt_generate_games(200, seed=4)
    games = []
    current = []
    for t in tuples:
        if t.state == EMPTY_BOARD and current:
            games.append(current)
            current = []
        current.append(t)
    games.append(current)
    assert len(games) == 200
    for game in games:
        assert game[0].state == EMPTY_BOARD
        for prev, nxt in zip(game, game[1:]):
            assert prev.next_state == nxt.state
            assert prev.reward == 0.0
        last = game[-1]
        outcome = ttt_winner(last.next_state)
        assert outcome != "ongoing"
        assert last.reward == {"X-wins": 1.0, "draw": 0.0, "B-wins": -1.0}[outcome]


def test_next_state_mark_counts():
    for t in ttt_generate_games(100, seed=13):
        x, b = t.next_state.count("X"), t.next_state.count("B")
        if ttt_winner(t.next_state) == "ongoing" or b > t.state.count("B"):
            assert x == b  # the opponent replied
        else:
            assert x == b + 1  # game ended on X's move


def test_win_rates_are_near_the_random_play_odds():
    tuples = ttt_generate_games(3000, seed=21)
    finals = [t for t in tuples if ttt_winner(t.next_state) != "ongoing"]
    assert len(finals) == 3000
    x_share = sum(t.reward == 1.0 for t in finals) / 3000
    draw_share = sum(t.reward == 0.0 for t in finals) / 3000
    # exhaustive enumeration of random-vs-random play gives 737/1260 and 8/63
    assert x_share == pytest.approx(737 / 1260, abs=0.03)
    assert draw_share == pytest.approx(8 / 63, abs=0.03)


def test_reachable_boards_structure():
    boards = reachable_boards()
    assert boards[0] == EMPTY_BOARD
    assert len(boards) == len(set(boards))
    for b in boards:
        # every stored board has X to move, or the game is over
        if ttt_winner(b) == "ongoing":
            assert b.count("X") == b.count("B")
    seen = set(boards)
    for t in ttt_generate_games(200, seed=2):
        assert t.state in seen
        assert t.next_state in seen


def test_step_absorbs_terminal_boards():
    rng = random.Random(0)
    assert tictactoe_step("XXX.BB...", "c4", rng) == EnvResponse("XXX.BB...", 0.0)


def test_step_penalizes_occupied_cells():
    rng = random.Random(0)
    board = "XB.BX...."
    assert tictactoe_step(board, "c1", rng) == EnvResponse(board, -1.0)


def test_step_plays_legal_moves():
    rng = random.Random(3)
    nxt, reward = tictactoe_step(EMPTY_BOARD, "c5", rng)
    assert nxt[4] == "X"
    assert nxt.count("B") == 1
    assert reward == 0.0


def test_step_validates_labels():
    rng = random.Random(0)
    with pytest.raises(ValueError):
        tictactoe_step(EMPTY_BOARD, "c10", rng)
    with pytest.raises(ValueError):
        tictactoe_step("not-a-board", "c1", rng)


def test_environment_wiring():
    env = tictactoe_environment()
    assert env.name == "tictactoe"
    assert env.actions == CELL_ACTIONS
    assert EMPTY_BOARD in env.states
    assert env.exact_mdp is None
