"""Hand-built reference constructions for every corpus game.

These builders are the trusted side of the evaluation harness: each one
reproduces the expected feature row of its game, and their serializations
are the golden .efg files used by the roundtrip suite.  Two extra builders
(the trust game and one-card poker) back the prompt demonstrations.
"""

from __future__ import annotations

from fractions import Fraction

from .game import CHANCE, Game


def trust_game() -> Game:
    g = Game.new_tree(["Buyer", "Seller"], "One-shot trust game")
    g.append_move("root", "Buyer", ["Trust", "Not trust"])
    g.append_move("root.0", "Seller", ["Honor", "Abuse"])
    g.set_outcome("root.0.0", g.add_outcome([1, 1], "Trustworthy"))
    g.set_outcome("root.0.1", g.add_outcome([-1, 2], "Untrustworthy"))
    g.set_outcome("root.1", g.add_outcome([0, 0], "Opt-out"))
    return g


def one_card_poker() -> Game:
    g = Game.new_tree(["Alice", "Bob"], "One card poker game")
    g.append_move("root", CHANCE, ["King", "Queen"])
    g.append_move("root.0", "Alice", ["Raise", "Fold"])
    g.append_move("root.1", "Alice", ["Raise", "Fold"])
    g.append_move("root.0.0", "Bob", ["Meet", "Pass"])
    g.append_move("root.1.0", "Bob", ["Meet", "Pass"])
    g.set_infoset("root.0.0", "root.1.0")
    alice_winsbig = g.add_outcome([2, -2], "Alice wins big")
    alice_wins = g.add_outcome([1, -1], "Alice wins")
    bob_winsbig = g.add_outcome([-2, 2], "Bob wins big")
    bob_wins = g.add_outcome([-1, 1], "Bob wins")
    g.set_outcome("root.0.0.0", alice_winsbig)
    g.set_outcome("root.0.0.1", alice_wins)
    g.set_outcome("root.0.1", bob_wins)
    g.set_outcome("root.1.0.0", bob_winsbig)
    g.set_outcome("root.1.0.1", alice_wins)
    g.set_outcome("root.1.1", bob_wins)
    return g


def three_player_game() -> Game:
    # Nobody observes anything: every stage is one grouped infoset.  The
    # description's common payoffs are replaced by a zero-sum assignment
    # (Player 3 balances the gains) to match the expected zero-sum flag.
    g = Game.new_tree(["Player 1", "Player 2", "Player 3"], "A three-player game")
    g.append_move("root", CHANCE, ["A", "B"])
    g.append_move(["root.0", "root.1"], "Player 1", ["L", "R"])
    g.append_move(["root.0.0", "root.1.0"], "Player 2", ["l", "r"])
    g.append_move(["root.0.0.0", "root.1.0.0"], "Player 3", ["a", "b"])
    after_r = g.add_outcome([1, 1, -2], "ends after R")
    after_rr = g.add_outcome([2, 2, -4], "ends after r")
    after_p3 = g.add_outcome([3, 3, -6], "ends after Player 3")
    for i in (0, 1):
        g.set_outcome(f"root.{i}.1", after_r)
        g.set_outcome(f"root.{i}.0.1", after_rr)
        g.set_outcome(f"root.{i}.0.0.0", after_p3)
        g.set_outcome(f"root.{i}.0.0.1", after_p3)
    return g


def imperfect_recall_game() -> Game:
    # Player 1 observes the chance move, acts, then forgets the chance move
    # while remembering their own action.
    g = Game.new_tree(["Player 1", "Player 2"], "An imperfect recall game")
    g.append_move("root", CHANCE, ["L", "R"])
    g.append_move("root.0", "Player 1", ["l", "r"])
    g.append_move("root.1", "Player 1", ["l", "r"])
    g.append_move(["root.0.0", "root.1.0"], "Player 1", ["A", "B"])
    g.append_move(["root.0.1", "root.1.1"], "Player 1", ["A", "B"])
    zero = g.add_outcome([0, 0], "all payoffs zero")
    for i in (0, 1):
        for j in (0, 1):
            for m in (0, 1):
                g.set_outcome(f"root.{i}.{j}.{m}", zero)
    return g


def absent_minded_driver() -> Game:
    g = Game.new_tree(["Driver"], "Absent-minded driver")
    g.append_move("root", "Driver", ["EXIT", "CONTINUE"])
    g.append_move("root.1", "Driver", ["EXIT", "CONTINUE"])
    g.set_infoset("root.1", "root")  # the driver cannot tell X from Y
    g.set_outcome("root.0", g.add_outcome([0], "destination A"))
    g.set_outcome("root.1.0", g.add_outcome([4], "destination B"))
    g.set_outcome("root.1.1", g.add_outcome([1], "destination C"))
    return g


def bach_or_stravinsky() -> Game:
    g = Game.new_tree(["Alexis", "Beverley"], "Bach or Stravinsky")
    g.append_move("root", "Alexis", ["Bach", "Stravinsky"])
    g.append_move(["root.0", "root.1"], "Beverley", ["Bach", "Stravinsky"])
    both_bach = g.add_outcome([2, 1], "both at Bach")
    both_strav = g.add_outcome([1, 2], "both at Stravinsky")
    apart = g.add_outcome([0, 0], "different concerts")
    g.set_outcome("root.0.0", both_bach)
    g.set_outcome("root.0.1", apart)
    g.set_outcome("root.1.0", apart)
    g.set_outcome("root.1.1", both_strav)
    return g


def bagwell() -> Game:
    # Ranking E > A > F > W > B > D realized as 6 > 5 > 4 > 3 > 2 > 1.
    g = Game.new_tree(["Player 1", "Player 2"], "Bagwell")
    g.append_move("root", "Player 1", ["S", "C"])
    g.append_move("root.0", CHANCE, ["perceived as S", "perceived as C"])
    g.append_move("root.1", CHANCE, ["perceived as C", "perceived as S"])
    g.set_chance_probs("root.0", [Fraction(99, 100), Fraction(1, 100)])
    g.set_chance_probs("root.1", [Fraction(99, 100), Fraction(1, 100)])
    # Player 2 knows only the perceived signal, not Player 1's actual choice.
    g.append_move(["root.0.0", "root.1.1"], "Player 2", ["S", "C"])
    g.append_move(["root.0.1", "root.1.0"], "Player 2", ["S", "C"])
    both_s = g.add_outcome([5, 2], "both S")
    s_then_c = g.add_outcome([3, 1], "S against C")
    c_then_s = g.add_outcome([6, 3], "C against S")
    both_c = g.add_outcome([4, 4], "both C")
    for chance_branch in (0, 1):  # payoffs follow Player 1's actual choice
        g.set_outcome(f"root.0.{chance_branch}.0", both_s)
        g.set_outcome(f"root.0.{chance_branch}.1", s_then_c)
        g.set_outcome(f"root.1.{chance_branch}.0", c_then_s)
        g.set_outcome(f"root.1.{chance_branch}.1", both_c)
    return g


def kuhn_poker() -> Game:
    deals = ["JQ", "JK", "QJ", "QK", "KJ", "KQ"]  # (Alice's card, Bob's card)
    rank = {"J": 1, "Q": 2, "K": 3}
    alice_groups = [[0, 1], [2, 3], [4, 5]]  # same Alice card
    bob_groups = [[2, 4], [0, 5], [1, 3]]  # same Bob card
    g = Game.new_tree(["Alice", "Bob"], "Kuhn poker")
    g.append_move("root", CHANCE, deals)  # six allocations, 1/6 each

    for i in range(6):
        g.append_move(f"root.{i}", "Alice", ["Check", "Bet"])
    for group in alice_groups:
        for other in group[1:]:
            g.set_infoset(f"root.{other}", f"root.{group[0]}")

    for i in range(6):
        g.append_move(f"root.{i}.0", "Bob", ["Check", "Bet"])
        g.append_move(f"root.{i}.1", "Bob", ["Fold", "Call"])
    for group in bob_groups:
        for other in group[1:]:
            g.set_infoset(f"root.{other}.0", f"root.{group[0]}.0")
            g.set_infoset(f"root.{other}.1", f"root.{group[0]}.1")

    for i in range(6):
        g.append_move(f"root.{i}.0.1", "Alice", ["Fold", "Call"])
    for group in alice_groups:
        for other in group[1:]:
            g.set_infoset(f"root.{other}.0.1", f"root.{group[0]}.0.1")

    alice1 = g.add_outcome([1, -1], "Alice wins 1")
    bob1 = g.add_outcome([-1, 1], "Bob wins 1")
    alice2 = g.add_outcome([2, -2], "Alice wins 2")
    bob2 = g.add_outcome([-2, 2], "Bob wins 2")

    def showdown(i, stake):
        alice_card, bob_card = deals[i]
        if rank[alice_card] > rank[bob_card]:
            return alice2 if stake == 2 else alice1
        return bob2 if stake == 2 else bob1

    for i in range(6):
        g.set_outcome(f"root.{i}.0.0", showdown(i, 1))  # check / check
        g.set_outcome(f"root.{i}.0.1.0", bob1)  # check / bet / fold
        g.set_outcome(f"root.{i}.0.1.1", showdown(i, 2))  # check / bet / call
        g.set_outcome(f"root.{i}.1.0", alice1)  # bet / fold
        g.set_outcome(f"root.{i}.1.1", showdown(i, 2))  # bet / call
    return g


def extra_game_one() -> Game:
    g = Game.new_tree(["Player 1", "Player 2"], "Extra game one")
    g.append_move("root", "Player 1", ["A", "B", "C"])
    g.append_move("root.0", "Player 2", ["D", "E", "F"])
    g.append_move(["root.1", "root.2"], "Player 2", ["D", "E", "F"])  # B vs C hidden
    for i in range(3):
        for j in (0, 1):
            g.append_move(f"root.{i}.{j}", "Player 1", ["G", "H"])
    for i in range(3):
        for j in (0, 1):
            g.append_move(f"root.{i}.{j}.0", "Player 2", ["Q", "W"])
    for j in (0, 1):  # B vs C still indistinguishable at the second move
        g.set_infoset(f"root.2.{j}.0", f"root.1.{j}.0")
    after_f = g.add_outcome([0, 0], "ends after F")
    after_h = g.add_outcome([2, -1], "ends after H")
    after_q = g.add_outcome([3, 3], "both gain after Q")
    after_w = g.add_outcome([0, 0], "nothing after W")
    for i in range(3):
        g.set_outcome(f"root.{i}.2", after_f)
        for j in (0, 1):
            g.set_outcome(f"root.{i}.{j}.1", after_h)
            g.set_outcome(f"root.{i}.{j}.0.0", after_q)
            g.set_outcome(f"root.{i}.{j}.0.1", after_w)
    return g


def extra_game_two() -> Game:
    g = Game.new_tree(["Player 1", "Player 2", "Player 3"], "Extra game two")
    g.append_move("root", "Player 1", ["A", "B", "C"])
    g.append_move(["root.0", "root.1", "root.2"], "Player 2", ["D", "E"])
    for i in range(3):  # Player 1 remembers A/B/C but never saw Player 2's move
        g.append_move([f"root.{i}.0", f"root.{i}.1"], "Player 1", ["F", "G"])
    third_stage = [f"root.{i}.{j}.{m}" for i in range(3) for j in (0, 1) for m in (0, 1)]
    g.append_move(third_stage, "Player 3", ["Q", "W"])
    after_q = g.add_outcome([3, 3, 3], "all gain after Q")
    after_w = g.add_outcome([2, 2, 3], "Player 3 ahead after W")
    for path in third_stage:
        g.set_outcome(f"{path}.0", after_q)
        g.set_outcome(f"{path}.1", after_w)
    return g


def market_signalling() -> Game:
    g = Game.new_tree(["New manufacturer", "Current manufacturer"], "Market signalling")
    g.append_move("root", CHANCE, ["Strong", "Weak"])
    g.set_chance_probs("root", [Fraction(2, 3), Fraction(1, 3)])
    g.append_move("root.0", "New manufacturer", ["Signal S", "Signal W"])
    g.append_move("root.1", "New manufacturer", ["Signal S", "Signal W"])
    # The incumbent sees the signal, never the true strength.
    g.append_move(["root.0.0", "root.1.0"], "Current manufacturer", ["F", "A"])
    g.append_move(["root.0.1", "root.1.1"], "Current manufacturer", ["F", "A"])
    payoffs = {
        (0, 0, 0): ([1, 0], "strong, signals S, fought"),
        (0, 0, 1): ([3, 1], "strong, signals S, accommodated"),
        (0, 1, 0): ([0, 0], "strong, signals W, fought"),
        (0, 1, 1): ([2, 1], "strong, signals W, accommodated"),
        (1, 0, 0): ([0, 2], "weak, signals S, fought"),
        (1, 0, 1): ([2, 1], "weak, signals S, accommodated"),
        (1, 1, 0): ([1, 2], "weak, signals W, fought"),
        (1, 1, 1): ([3, 1], "weak, signals W, accommodated"),
    }
    for (strength, signal, reaction), (vector, label) in payoffs.items():
        outcome = g.add_outcome(vector, label)
        g.set_outcome(f"root.{strength}.{signal}.{reaction}", outcome)
    return g


def nuclear_crisis() -> Game:
    g = Game.new_tree(["Country A", "Country B"], "Nuclear crisis")
    g.append_move("root", "Country A", ["E", "I"])
    g.append_move("root.0", "Country B", ["B", "E"])
    g.append_move("root.0.1", "Country A", ["R", "D"])
    g.append_move(["root.0.1.0", "root.0.1.1"], "Country B", ["R", "D"])
    g.set_outcome("root.1", g.add_outcome([1, 1], "provocation ignored"))
    g.set_outcome("root.0.0", g.add_outcome([2, -1], "B backs down"))
    g.set_outcome("root.0.1.0.0", g.add_outcome([-2, -2], "both retreat"))
    g.set_outcome("root.0.1.0.1", g.add_outcome([-10, 10], "B detonates alone"))
    g.set_outcome("root.0.1.1.0", g.add_outcome([10, -10], "A detonates alone"))
    g.set_outcome("root.0.1.1.1", g.add_outcome([-100, -100], "nuclear disaster"))
    return g


def rock_paper_scissors() -> Game:
    symbols = ["Rock", "Paper", "Scissors"]
    g = Game.new_tree(["Player 1", "Player 2"], "Rock, paper, scissors")
    g.append_move("root", "Player 1", symbols)
    g.append_move(["root.0", "root.1", "root.2"], "Player 2", symbols)
    tie = g.add_outcome([0, 0], "tie")
    p1_wins = g.add_outcome([1, -1], "Player 1 wins")
    p2_wins = g.add_outcome([-1, 1], "Player 2 wins")
    beats = {("Rock", "Scissors"), ("Scissors", "Paper"), ("Paper", "Rock")}
    for i, mine in enumerate(symbols):
        for j, theirs in enumerate(symbols):
            if mine == theirs:
                outcome = tie
            elif (mine, theirs) in beats:
                outcome = p1_wins
            else:
                outcome = p2_wins
            g.set_outcome(f"root.{i}.{j}", outcome)
    return g


def centipede() -> Game:
    g = Game.new_tree(["Alice", "Bob"], "Centipede")
    g.append_move("root", "Alice", ["Take", "Push"])
    g.append_move("root.1", "Bob", ["Take", "Push"])
    g.append_move("root.1.1", "Alice", ["Take", "Push"])
    g.append_move("root.1.1.1", "Bob", ["Take", "Push"])
    g.set_outcome("root.0", g.add_outcome([4, 1], "Alice takes at once"))
    g.set_outcome("root.1.0", g.add_outcome([2, 8], "Bob takes"))
    g.set_outcome("root.1.1.0", g.add_outcome([16, 4], "Alice takes"))
    g.set_outcome("root.1.1.1.0", g.add_outcome([8, 32], "Bob takes late"))
    g.set_outcome("root.1.1.1.1", g.add_outcome([64, 16], "piles pushed to the end"))
    return g


def colonial_control() -> Game:
    g = Game.new_tree(["Country A", "Country B"], "Colonial control")
    g.append_move("root", "Country B", ["Accept", "Rebel"])
    g.append_move("root.0", "Country A", ["Tax", "Drop Taxes"])
    g.append_move("root.1", "Country A", ["Grant Independence", "Suppress"])
    g.append_move("root.1.1", CHANCE, ["B wins the war", "B loses the war"])
    g.set_chance_probs("root.1.1", [Fraction(3, 10), Fraction(7, 10)])
    g.set_outcome("root.0.0", g.add_outcome([6, -2], "taxes continue"))
    g.set_outcome("root.0.1", g.add_outcome([4, 0], "taxes dropped"))
    g.set_outcome("root.1.0", g.add_outcome([0, 3], "independence granted"))
    g.set_outcome("root.1.1.0", g.add_outcome([-1, -3], "B wins the war"))
    g.set_outcome("root.1.1.1", g.add_outcome([-1, -5], "B loses the war"))
    return g


def extra_game_three() -> Game:
    g = Game.new_tree(["Player 1", "Player 2"], "Extra game three")
    g.append_move("root", CHANCE, ["A", "B", "C", "D"])
    for i in range(4):
        g.append_move(f"root.{i}", "Player 1", ["E", "F", "G"])
        for j in range(3):
            g.append_move(f"root.{i}.{j}", "Player 2", ["Q", "W"])
    table = {0: ([1, -1], [2, -2]), 1: ([3, -3], [-3, 3]), 2: ([0, 0], [-1, 1]), 3: ([4, -4], [-4, 4])}
    for i, (q_vec, w_vec) in table.items():
        branch = "ABCD"[i]
        q_out = g.add_outcome(q_vec, f"Q under {branch}")
        w_out = g.add_outcome(w_vec, f"W under {branch}")
        for j in range(3):
            g.set_outcome(f"root.{i}.{j}.0", q_out)
            g.set_outcome(f"root.{i}.{j}.1", w_out)
    return g


def market_entry() -> Game:
    g = Game.new_tree(["Firm 1", "Firm 2"], "Market entry")
    g.append_move("root", "Firm 2", ["Enter", "Stay out"])
    g.append_move("root.0", "Firm 1", ["Fight", "Accommodate"])
    g.set_outcome("root.1", g.add_outcome([4, 0], "monopoly preserved"))
    g.set_outcome("root.0.0", g.add_outcome([0, 1], "entry fought"))
    g.set_outcome("root.0.1", g.add_outcome([2, 2], "entry accommodated"))
    return g


def nim() -> Game:
    g = Game.new_tree(["Alice", "Bob"], "Nim with five in one pile")
    alice_loses = g.add_outcome([-1, 1], "Alice takes the last stone")
    bob_loses = g.add_outcome([1, -1], "Bob takes the last stone")

    def build(path: str, stones: int, mover: str, other: str):
        # Misere play: taking the last stone loses.  With one stone left the
        # move is forced but still an explicit decision node.
        actions = ["Take 1"] if stones == 1 else ["Take 1", "Take 2"]
        g.append_move(path, mover, actions)
        for index in range(len(actions)):
            remaining = stones - (index + 1)
            child = f"{path}.{index}"
            if remaining == 0:
                g.set_outcome(child, alice_loses if mover == "Alice" else bob_loses)
            else:
                build(child, remaining, other, mover)

    build("root", 5, "Alice", "Bob")
    return g


def simple_bargaining() -> Game:
    g = Game.new_tree(["A", "B"], "Simple bargaining")
    g.append_move("root", "A", ["Propose 5500/4500"])
    g.append_move("root.0", "B", ["Accept", "Reject"])
    g.append_move("root.0.1", "B", ["Propose 5000/5000"])
    g.append_move("root.0.1.0", "A", ["Accept", "Reject"])
    g.append_move("root.0.1.0.1", "A", ["Propose 5200/4800"])
    g.set_outcome("root.0.0", g.add_outcome([5500, 4500], "first offer accepted"))
    g.set_outcome("root.0.1.0.0", g.add_outcome([4750, 4750], "equal split accepted"))
    g.set_outcome("root.0.1.0.1.0", g.add_outcome([4693, 4332], "final split imposed"))
    return g


def tic_tac_toe() -> Game:
    g = Game.new_tree(["x", "o"], "Tic-tac-toe endgame")
    g.append_move("root", "x", ["(0, 0)", "(0, 2)", "(1, 0)"])
    g.append_move("root.0", "o", ["(0, 2)", "(1, 0)"])
    g.append_move("root.0.1", "x", ["(0, 2)"])
    g.append_move("root.2", "o", ["(0, 0)", "(0, 2)"])
    g.append_move("root.2.0", "x", ["(0, 2)"])
    x_wins = g.add_outcome([1, -1], "x wins")
    o_wins = g.add_outcome([-1, 1], "o wins")
    g.set_outcome("root.0.0", o_wins)
    g.set_outcome("root.0.1.0", x_wins)
    g.set_outcome("root.1", x_wins)
    g.set_outcome("root.2.0.0", x_wins)
    g.set_outcome("root.2.1", o_wins)
    return g


CORPUS_BUILDERS = {
    "three_player_game": three_player_game,
    "imperfect_recall_game": imperfect_recall_game,
    "absent_minded_driver": absent_minded_driver,
    "bach_or_stravinsky": bach_or_stravinsky,
    "bagwell": bagwell,
    "kuhn_poker": kuhn_poker,
    "extra_game_one": extra_game_one,
    "extra_game_two": extra_game_two,
    "market_signalling": market_signalling,
    "nuclear_crisis": nuclear_crisis,
    "rock_paper_scissors": rock_paper_scissors,
    "centipede": centipede,
    "colonial_control": colonial_control,
    "extra_game_three": extra_game_three,
    "market_entry": market_entry,
    "nim": nim,
    "simple_bargaining": simple_bargaining,
    "tic_tac_toe": tic_tac_toe,
}
