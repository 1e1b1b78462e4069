import sys

from netdecode.main import main

sys.exit(main())
