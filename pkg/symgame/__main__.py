from symgame.main import run

run()
