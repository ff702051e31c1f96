import sys

from blockstream.cli import main

sys.exit(main())
