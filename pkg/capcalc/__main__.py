# capcalc/__main__.py
from capcalc.main import app

app(prog_name="capcalc")
