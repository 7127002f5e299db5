import os
import sys

# the figure scripts live one level up and are run as plain scripts
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__),
                                                "..")))
