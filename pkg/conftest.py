import os
import sys

# Модули лежат плоско в корне и импортируются по имени.
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
