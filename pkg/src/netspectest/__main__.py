import sys

from netspectest.cli import main

sys.exit(main())
