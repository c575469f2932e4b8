"""Generated by tools/gen_ttable.py; do not edit."""

# df -> upper 0.975 quantile of Student's t
T975 = (
    None,
    12.7062047362,  # 1
    4.30265272975,  # 2
    3.18244630528,  # 3
    2.77644510520,  # 4
    2.57058183564,  # 5
    2.44691185114,  # 6
    2.36462425159,  # 7
    2.30600413520,  # 8
    2.26215716280,  # 9
    2.22813885199,  # 10
    2.20098516009,  # 11
    2.17881282967,  # 12
    2.16036865646,  # 13
    2.14478668792,  # 14
    2.13144954556,  # 15
    2.11990529922,  # 16
    2.10981557783,  # 17
    2.10092204024,  # 18
    2.09302405441,  # 19
    2.08596344727,  # 20
    2.07961384473,  # 21
    2.07387306790,  # 22
    2.06865761042,  # 23
    2.06389856163,  # 24
    2.05953855275,  # 25
    2.05552943864,  # 26
    2.05183051648,  # 27
    2.04840714180,  # 28
    2.04522964213,  # 29
    2.04227245630,  # 30
    2.03951344640,  # 31
    2.03693334346,  # 32
    2.03451529745,  # 33
    2.03224450932,  # 34
    2.03010792825,  # 35
    2.02809400098,  # 36
    2.02619246303,  # 37
    2.02439416391,  # 38
    2.02269092004,  # 39
    2.02107539031,  # 40
    2.01954097044,  # 41
    2.01808170282,  # 42
    2.01669219923,  # 43
    2.01536757444,  # 44
    2.01410338888,  # 45
    2.01289559892,  # 46
    2.01174051373,  # 47
    2.01063475762,  # 48
    2.00957523713,  # 49
    2.00855911210,  # 50
    2.00758377032,  # 51
    2.00664680506,  # 52
    2.00574599532,  # 53
    2.00487928819,  # 54
    2.00404478329,  # 55
    2.00324071885,  # 56
    2.00246545929,  # 57
    2.00171748415,  # 58
    2.00099537809,  # 59
    2.00029782201,  # 60
    1.99962358499,  # 61
    1.99897151703,  # 62
    1.99834054252,  # 63
    1.99772965432,  # 64
    1.99713790839,  # 65
    1.99656441895,  # 66
    1.99600835403,  # 67
    1.99546893143,  # 68
    1.99494541511,  # 69
    1.99443711177,  # 70
    1.99394336785,  # 71
    1.99346356666,  # 72
    1.99299712589,  # 73
    1.99254349518,  # 74
    1.99210215400,  # 75
    1.99167260964,  # 76
    1.99125439539,  # 77
    1.99084706881,  # 78
    1.99045021023,  # 79
    1.99006342125,  # 80
    1.98968632346,  # 81
    1.98931855714,  # 82
    1.98895978018,  # 83
    1.98860966698,  # 84
    1.98826790748,  # 85
    1.98793420624,  # 86
    1.98760828159,  # 87
    1.98728986483,  # 88
    1.98697869951,  # 89
    1.98667454070,  # 90
    1.98637715442,  # 91
    1.98608631695,  # 92
    1.98580181435,  # 93
    1.98552344187,  # 94
    1.98525100351,  # 95
    1.98498431152,  # 96
    1.98472318601,  # 97
    1.98446745451,  # 98
    1.98421695159,  # 99
    1.98397151852,  # 100
)
