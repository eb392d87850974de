"""
Keeps the repository root on 'sys.path' so `model`, `routes`, `data` and
`app` import the same way from every test folder.
"""
