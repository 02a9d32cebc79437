"""Built-in French-like sentence material for the synthetic corpus."""

from ..alphabet.tags import Category

# Relative entity frequencies of French broadcast-news annotation; the
# default category weights of the generator.
DEFAULT_CATEGORY_WEIGHTS: dict[Category, float] = {
    Category.PERS: 22115,
    Category.FUNC: 6628,
    Category.ORG: 15804,
    Category.LOC: 18159,
    Category.PROD: 2317,
    Category.TIME: 12020,
    Category.AMOUNT: 5959,
    Category.EVENT: 321,
}

DEFAULT_GAZETTEERS: dict[Category, list[str]] = {
    Category.PERS: [
        "césar",
        "jean dupont",
        "marie curie",
        "victor hugo",
        "jacques chirac",
        "édith piaf",
        "charles de gaulle",
        "simone veil",
        "louis pasteur",
        "claude monet",
        "martine aubry",
        "pierre durand",
        "sophie martin",
        "paul verlaine",
        "georges brassens",
        "lucie aubrac",
    ],
    Category.FUNC: [
        "le président",
        "le ministre",
        "le sculpteur",
        "le maire",
        "la directrice",
        "le premier ministre",
        "le sénateur",
        "le juge",
        "la députée",
        "le général",
        "le préfet",
        "la chanteuse",
    ],
    Category.ORG: [
        "air france",
        "la sncf",
        "le parti socialiste",
        "les nations unies",
        "renault",
        "radio france",
        "le conseil constitutionnel",
        "la banque de france",
        "le sénat",
        "la commission européenne",
        "peugeot",
        "michelin",
        "la cgt",
    ],
    Category.LOC: [
        "paris",
        "lyon",
        "marseille",
        "bordeaux",
        "toulouse",
        "lille",
        "nantes",
        "strasbourg",
        "la bretagne",
        "la corse",
        "le havre",
        "grenoble",
        "la belgique",
        "le japon",
        "bruxelles",
        "londres",
        "berlin",
        "madrid",
    ],
    Category.PROD: [
        "le figaro",
        "libération",
        "les misérables",
        "la marseillaise",
        "le petit prince",
        "la joconde",
        "le concorde",
        "le rafale",
        "télérama",
    ],
    Category.AMOUNT: [
        "soixante dix sept ans",
        "deux cents euros",
        "trois millions",
        "dix pour cent",
        "cinquante kilomètres",
        "mille personnes",
        "vingt ans",
        "quatre vingt dix euros",
        "cent mille habitants",
        "trente degrés",
        "deux milliards de dollars",
    ],
    Category.TIME: [
        "hier",
        "demain",
        "lundi",
        "mardi",
        "ce matin",
        "cette semaine",
        "en mars",
        "le premier janvier",
        "la semaine dernière",
        "dimanche soir",
        "cet été",
        "vendredi",
        "le mois prochain",
    ],
    Category.EVENT: [
        "la coupe du monde",
        "le tour de france",
        "les jeux olympiques",
        "le festival de cannes",
        "la seconde guerre mondiale",
        "la fête de la musique",
    ],
}

DEFAULT_TEMPLATES: list[str] = [
    # pers
    "{pers} est arrivé",
    "selon {pers}",
    "{pers} a déclaré",
    "nous avons rencontré {pers}",
    "{pers} est mort",
    # func
    "{func} a annoncé",
    "selon {func}",
    "{func} est en visite",
    # org
    "les salariés de {org}",
    "{org} a publié",
    "une réunion chez {org}",
    # loc
    "à {loc}",
    "il habite à {loc}",
    "en direction de {loc}",
    "il pleut sur {loc}",
    # prod
    "il a lu {prod}",
    "le succès de {prod}",
    # amount
    "il a payé {amount}",
    "une hausse de {amount}",
    "à l âge de {amount}",
    # time
    "{time}",
    "il est parti {time}",
    "la réunion aura lieu {time}",
    # event
    "pendant {event}",
    "les images de {event}",
    # fillers
    "bonjour à tous",
    "voici les informations",
    "il fait beau",
    "merci beaucoup",
    "la suite après la pause",
    "nous revenons",
]

DEFAULT_VOCABULARY: list[str] = [
    "et",
    "puis",
    "alors",
    "donc",
    "mais",
    "aussi",
    "encore",
    "vraiment",
    "ensuite",
    "enfin",
]

# Words the rule-based annotator treats as number words, units and time words.
NUMBER_WORDS: list[str] = [
    "un",
    "deux",
    "trois",
    "quatre",
    "cinq",
    "six",
    "sept",
    "huit",
    "neuf",
    "dix",
    "onze",
    "douze",
    "vingt",
    "trente",
    "quarante",
    "cinquante",
    "soixante",
    "cent",
    "cents",
    "mille",
    "millions",
    "milliards",
]
UNIT_WORDS: list[str] = [
    "ans",
    "euros",
    "dollars",
    "kilomètres",
    "personnes",
    "habitants",
    "degrés",
    "pour cent",
]
TIME_WORDS: list[str] = [
    "hier",
    "demain",
    "lundi",
    "mardi",
    "mercredi",
    "jeudi",
    "vendredi",
    "samedi",
    "dimanche",
    "janvier",
    "mars",
    "mai",
    "juin",
    "été",
    "hiver",
]
