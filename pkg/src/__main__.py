import sys

from .API import main

sys.exit(main())
