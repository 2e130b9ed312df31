"""Iterated elimination, start to finish.

Parses a small game from text, runs the elimination operator for each
builtin optimality condition, and prints the full stage-by-stage traces.
The second game needs several rounds before the best-response operator
settles, while the dominance conditions remove nothing at all.
"""
from epigame.conditions import BUILTIN_CONDITION_TEXT
from epigame.games import parse_game
from epigame.operators import condition_operator, format_trace, iterate
from epigame.oracles import fig2

DOMINANCE_GAME = """\
players: 2
strategies 1: U D
strategies 2: L R
payoff U L : 2 2
payoff U R : 1 1
payoff D L : 1 1
payoff D R : 0 0
"""

game = parse_game(DOMINANCE_GAME)
print("A game where U dominates D:")
for name, text in BUILTIN_CONDITION_TEXT.items():
    print(f"\n{name}  ({text})")
    print(format_trace(iterate(condition_operator(game, name))))

wide = fig2()
print("\n\nA 3x2 game: only best response bites, and it takes three rounds.")
for name in ("lsd", "gsd", "gbr"):
    print(f"\n{name}")
    print(format_trace(iterate(condition_operator(wide, name))))
