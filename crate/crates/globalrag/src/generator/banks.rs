//! Static vocabulary for corpus synthesis: domains with their skill pools,
//! shared skills, semantic skill groups, names, and cities.

/// Professional domains paired with six domain-specific skills each.
pub const DOMAINS: &[(&str, [&str; 6])] = &[
    (
        "finance",
        [
            "auditing",
            "financial modeling",
            "risk assessment",
            "portfolio management",
            "forecasting",
            "regulatory reporting",
        ],
    ),
    (
        "healthcare",
        [
            "patient care",
            "triage",
            "clinical documentation",
            "medical coding",
            "care coordination",
            "infection control",
        ],
    ),
    (
        "software",
        [
            "rust",
            "distributed systems",
            "code review",
            "machine learning",
            "database design",
            "api design",
        ],
    ),
    (
        "education",
        [
            "curriculum design",
            "lesson planning",
            "student assessment",
            "classroom management",
            "tutoring",
            "instructional technology",
        ],
    ),
    (
        "legal",
        [
            "contract drafting",
            "litigation support",
            "legal research",
            "compliance review",
            "due diligence",
            "case management",
        ],
    ),
    (
        "marketing",
        [
            "campaign planning",
            "brand strategy",
            "market research",
            "copywriting",
            "search optimization",
            "social media analytics",
        ],
    ),
    (
        "manufacturing",
        [
            "lean manufacturing",
            "quality control",
            "process optimization",
            "supply planning",
            "equipment maintenance",
            "six sigma",
        ],
    ),
    (
        "retail",
        [
            "inventory management",
            "merchandising",
            "loss prevention",
            "customer service",
            "visual display",
            "demand planning",
        ],
    ),
    (
        "hospitality",
        [
            "event planning",
            "guest relations",
            "menu design",
            "housekeeping operations",
            "reservation systems",
            "banquet coordination",
        ],
    ),
    (
        "construction",
        [
            "site supervision",
            "blueprint reading",
            "cost estimation",
            "safety compliance",
            "project scheduling",
            "subcontractor management",
        ],
    ),
    (
        "logistics",
        [
            "route optimization",
            "fleet management",
            "warehouse operations",
            "customs documentation",
            "freight negotiation",
            "inventory forecasting",
        ],
    ),
    (
        "energy",
        [
            "grid operations",
            "renewable integration",
            "load forecasting",
            "pipeline inspection",
            "energy auditing",
            "turbine maintenance",
        ],
    ),
    (
        "agriculture",
        [
            "crop rotation",
            "irrigation design",
            "soil analysis",
            "pest management",
            "harvest logistics",
            "livestock care",
        ],
    ),
    (
        "media",
        [
            "video editing",
            "script writing",
            "broadcast production",
            "audio engineering",
            "photojournalism",
            "content scheduling",
        ],
    ),
    (
        "telecom",
        [
            "network engineering",
            "spectrum planning",
            "fiber installation",
            "signal testing",
            "capacity planning",
            "protocol analysis",
        ],
    ),
    (
        "insurance",
        [
            "claims processing",
            "underwriting",
            "actuarial analysis",
            "policy administration",
            "fraud detection",
            "reinsurance",
        ],
    ),
    (
        "pharmaceuticals",
        [
            "clinical trials",
            "drug safety",
            "regulatory affairs",
            "formulation",
            "pharmacovigilance",
            "lab automation",
        ],
    ),
    (
        "automotive",
        [
            "engine diagnostics",
            "chassis design",
            "emissions testing",
            "assembly line balancing",
            "vehicle telematics",
            "crash simulation",
        ],
    ),
    (
        "aerospace",
        [
            "avionics",
            "propulsion analysis",
            "structural testing",
            "flight simulation",
            "satellite operations",
            "composite materials",
        ],
    ),
    (
        "government",
        [
            "policy analysis",
            "grant administration",
            "public records",
            "procurement",
            "legislative drafting",
            "census operations",
        ],
    ),
    (
        "nonprofit",
        [
            "fundraising",
            "volunteer coordination",
            "grant writing",
            "donor relations",
            "program evaluation",
            "community outreach",
        ],
    ),
    (
        "consulting",
        [
            "stakeholder interviews",
            "process mapping",
            "change management",
            "benchmarking",
            "workshop facilitation",
            "strategy development",
        ],
    ),
    (
        "biotech",
        [
            "gene sequencing",
            "cell culture",
            "bioinformatics",
            "assay development",
            "protein purification",
            "genome editing",
        ],
    ),
];

/// Skills any professional may carry regardless of domain.
pub const SHARED_SKILLS: &[&str] = &[
    "communication",
    "leadership",
    "budgeting",
    "negotiation",
    "data analysis",
    "project management",
    "public speaking",
    "mentoring",
];

/// Groups of related skills used for semantic (expansion) conditions. The
/// first member is the canonical phrase used in question text; matching is
/// against any member present in the corpus.
pub const SEMANTIC_GROUPS: &[&[&str]] = &[
    &[
        "forecasting",
        "load forecasting",
        "inventory forecasting",
        "demand planning",
    ],
    &["auditing", "energy auditing", "compliance review", "regulatory reporting"],
    &["quality control", "signal testing", "structural testing", "emissions testing"],
    &[
        "project management",
        "case management",
        "fleet management",
        "change management",
    ],
    &["grant writing", "grant administration", "fundraising"],
    &["machine learning", "bioinformatics", "data analysis"],
    &["safety compliance", "infection control", "drug safety"],
    &[
        "process optimization",
        "process mapping",
        "route optimization",
        "assembly line balancing",
    ],
    &["cost estimation", "budgeting", "actuarial analysis"],
    &["negotiation", "freight negotiation", "donor relations"],
];

pub const FIRST_NAMES: &[&str] = &[
    "Ada", "Amir", "Anya", "Bram", "Carla", "Chen", "Dario", "Dina", "Elif", "Emeka",
    "Farah", "Gustav", "Hana", "Idris", "Ines", "Jonas", "Keiko", "Lars", "Leila", "Mateo",
    "Mira", "Nadia", "Noor", "Olga", "Omar", "Priya", "Quinn", "Ravi", "Rosa", "Samir",
    "Sofia", "Tariq", "Tessa", "Umar", "Vera", "Wei", "Ximena", "Yusuf", "Zara", "Zoltan",
];

pub const LAST_NAMES: &[&str] = &[
    "Abebe", "Bauer", "Castillo", "Demir", "Eriksen", "Fontaine", "Gupta", "Haddad",
    "Ivanova", "Jansen", "Kowalski", "Lindqvist", "Moreau", "Nakamura", "Okafor", "Petrov",
    "Quispe", "Rahman", "Silva", "Tanaka", "Ueda", "Varga", "Weber", "Xu", "Yamada",
    "Zhang", "Almeida", "Bianchi", "Costa", "Dubois", "Eze", "Fischer", "Garcia", "Horvat",
    "Iqbal", "Johansson", "Kim", "Lopez", "Mbeki", "Novak",
];

pub const CITIES: &[&str] = &[
    "Aurora Bay", "Brookfield", "Cedar Falls", "Dunmore", "Eastvale", "Fairhaven",
    "Glenwood", "Harborview", "Ironton", "Juniper Hills", "Kingsport", "Lakewood",
    "Maplewood", "Northgate", "Oakridge", "Pinecrest",
];
